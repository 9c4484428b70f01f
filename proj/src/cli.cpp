#include "qepzne/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qepzne/calib.hpp"
#include "qepzne/circuit.hpp"
#include "qepzne/mitigate.hpp"
#include "qepzne/noise.hpp"
#include "qepzne/qep.hpp"
#include "qepzne/sim.hpp"

namespace qepzne::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << body;
}

unsigned env_threads() {
    const char* v = std::getenv("QEPZNE_THREADS");
    if (!v || !*v) return 1;
    long n = std::strtol(v, nullptr, 10);
    if (n < 0) return 1;
    return unsigned(n);  // 0 = auto
}

std::string metadata_line(const std::vector<std::string>& args, const std::string& label) {
    std::ostringstream os;
    os << "# qepzne";
    for (const auto& a : args) os << " " << a;
    if (!label.empty()) os << " [calib: " << label << "]";
    os << "\n";
    return os.str();
}

Circuit load_circuit_file(const std::string& path) { return parse_circuit(read_file(path)); }

CalibrationSnapshot load_calib_file(const std::string& path) {
    return load_snapshot(read_file(path));
}

int cmd_gen_trotter(CLI::App& app, const std::vector<std::string>& args) {
    TrotterParams p;
    std::string j_text = "0", h_text = "0", dt_text;
    std::string edges_file, out_path;
    bool chain = false, to_native = false, prune = false;
    app.add_option("--qubits", p.n_qubits, "number of qubits")->required();
    app.add_option("--steps", p.steps, "Trotter steps")->required();
    app.add_option("--dt", dt_text, "time step")->required();
    app.add_option("--J", j_text, "ZZ coupling (accepts pi literals)")->required();
    app.add_option("--h", h_text, "transverse field (accepts pi literals)")->required();
    auto* chain_flag = app.add_flag("--chain", chain, "linear-chain topology");
    app.add_option("--edges", edges_file, "edge list file, one 'i j' pair per line")
        ->excludes(chain_flag);
    app.add_flag("--native", to_native, "decompose to the native gate set");
    app.add_flag("--prune-identity", prune, "drop zero-angle rz/rx gates");
    app.add_option("-o,--output", out_path, "output circuit file")->required();
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    p.dt = parse_angle_literal(dt_text);
    p.coupling = parse_angle_literal(j_text);
    p.transverse_field = parse_angle_literal(h_text);
    if (chain) {
        p.topology = TrotterParams::chain(p.n_qubits);
    } else if (!edges_file.empty()) {
        std::istringstream es(read_file(edges_file));
        long a, b;
        while (es >> a >> b) {
            if (a < 0 || b < 0 || a == b) throw InputError("bad edge in " + edges_file);
            p.topology.push_back({uint32_t(std::min(a, b)), uint32_t(std::max(a, b))});
        }
    } else {
        throw CLI::ValidationError("topology", "one of --chain or --edges is required");
    }

    Circuit c = build_trotter_ising(p);
    if (to_native) c = decompose_to_native(c);
    if (prune) c = prune_identity(c);
    write_output(out_path, serialize(c));
    return 0;
}

int cmd_qep(CLI::App& app, const std::vector<std::string>& args) {
    std::string circuit_path, calib_path, out_path;
    bool include_measurement = false;
    app.add_option("--circuit", circuit_path, "circuit file")->required();
    app.add_option("--calib", calib_path, "calibration snapshot (JSON)")->required();
    app.add_flag("--include-measurement", include_measurement,
                 "fold readout error into the per-qubit probability");
    app.add_option("-o,--output", out_path, "output CSV (default stdout)");
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    Circuit c = load_circuit_file(circuit_path);
    if (!c.native) throw InputError("qep requires a native circuit (use gen-trotter --native)");
    CalibrationSnapshot s = load_calib_file(calib_path);
    QepReport r = qep(c, s, include_measurement);
    for (const auto& w : r.warnings) std::cerr << format_warning(w) << "\n";
    write_output(out_path, metadata_line(args, s.label) + qep_report_csv(r));
    return 0;
}

int cmd_zne(CLI::App& app, const std::vector<std::string>& args) {
    std::string circuit_path, calib_path, out_path;
    std::string backend = "stab", axis = "qep", fold = "end", weights = "none";
    std::string factors_text = "0,1,2,3";
    ZneConfig cfg;
    app.add_option("--circuit", circuit_path, "circuit file")->required();
    app.add_option("--calib", calib_path, "calibration snapshot (JSON)")->required();
    app.add_option("--backend", backend, "dm | stab")
        ->check(CLI::IsMember({"dm", "stab"}));
    app.add_option("--factors", factors_text, "comma-separated amplification factors");
    app.add_option("--axis", axis, "qep | factor")->check(CLI::IsMember({"qep", "factor"}));
    app.add_option("--shots", cfg.shots, "shots per point (stab backend)");
    app.add_option("--seed", cfg.seed, "rng seed");
    app.add_option("--fold", fold, "end | local")->check(CLI::IsMember({"end", "local"}));
    app.add_option("--weights", weights, "none | stderr")
        ->check(CLI::IsMember({"none", "stderr"}));
    app.add_option("-o,--output", out_path, "output CSV (default stdout)");
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    cfg.factors.clear();
    std::istringstream fs(factors_text);
    std::string tok;
    while (std::getline(fs, tok, ',')) {
        if (tok.empty()) continue;
        long f = std::strtol(tok.c_str(), nullptr, 10);
        if (f < 0) throw CLI::ValidationError("--factors", "factors must be >= 0");
        cfg.factors.push_back(uint32_t(f));
    }
    if (cfg.factors.size() < 2)
        throw CLI::ValidationError("--factors", "need at least 2 factors (raw plus one)");
    cfg.backend = backend == "dm" ? Backend::DENSITY_MATRIX : Backend::STABILIZER;
    cfg.axis = axis == "qep" ? ZneAxis::QEP : ZneAxis::FACTOR;
    cfg.fold = fold == "end" ? FoldPlacement::END : FoldPlacement::LOCAL;
    cfg.weight_by_stderr = weights == "stderr";
    cfg.threads = env_threads();

    Circuit c = load_circuit_file(circuit_path);
    if (!c.native) throw InputError("zne requires a native circuit");
    CalibrationSnapshot s = load_calib_file(calib_path);
    ZneResult r = zne(c, s, cfg);
    write_output(out_path, metadata_line(args, s.label) + zne_csv(r));
    return 0;
}

int cmd_simulate(CLI::App& app, const std::vector<std::string>& args) {
    std::string circuit_path, calib_path, out_path;
    std::string backend = "stab";
    uint64_t shots = 4096, seed = 0;
    app.add_option("--circuit", circuit_path, "circuit file")->required();
    app.add_option("--calib", calib_path, "calibration snapshot (JSON)")->required();
    app.add_option("--backend", backend, "dm | stab")
        ->check(CLI::IsMember({"dm", "stab"}));
    app.add_option("--shots", shots, "shots (stab backend)");
    app.add_option("--seed", seed, "rng seed");
    app.add_option("-o,--output", out_path, "output CSV (default stdout)");
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    Circuit c = load_circuit_file(circuit_path);
    if (!c.native) throw InputError("simulate requires a native circuit");
    CalibrationSnapshot s = load_calib_file(calib_path);
    Schedule sch = schedule(c, s);
    NoiseModel nm = build_noise_model(c, s, sch);
    PerQubitZ z;
    std::ostringstream meta;
    if (backend == "dm") {
        z = run_density_matrix(c, nm);
        meta << "# backend=dm shots=0 seed=" << seed << "\n";
    } else {
        StabOptions so;
        so.threads = env_threads();
        z = run_stabilizer(c, nm, shots, seed, so);
        meta << "# backend=stab shots=" << shots << " seed=" << seed << "\n";
    }
    std::ostringstream body;
    body.precision(12);
    body << "qubit,z_expectation,stderr\n";
    for (size_t q = 0; q < z.z.size(); ++q)
        body << q << "," << z.z[q] << "," << z.stderr_[q] << "\n";
    write_output(out_path, meta.str() + body.str());
    return 0;
}

}  // namespace

double parse_angle_literal(const std::string& text) {
    std::string t = text;
    double sign = 1.0;
    size_t pos = 0;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
        if (t[pos] == '-') sign = -1.0;
        ++pos;
    }
    size_t pi_at = t.find("pi", pos);
    if (pi_at == std::string::npos) {
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw InputError("bad numeric literal: " + text);
        return v;
    }
    double mult = 1.0;
    std::string before = t.substr(pos, pi_at - pos);
    if (!before.empty() && before != "*") {
        if (before.back() == '*') before.pop_back();
        size_t used = 0;
        mult = std::stod(before, &used);
        if (used != before.size()) throw InputError("bad pi literal: " + text);
    }
    double div = 1.0;
    std::string after = t.substr(pi_at + 2);
    if (!after.empty()) {
        if (after[0] != '/') throw InputError("bad pi literal: " + text);
        size_t used = 0;
        div = std::stod(after.substr(1), &used);
        if (used != after.size() - 1 || div == 0.0)
            throw InputError("bad pi literal: " + text);
    }
    return sign * mult * kPi / div;
}

int run(const std::vector<std::string>& argv) {
    CLI::App app{"qubit-error-probability toolkit: circuit generation, QEP reports, "
                 "noisy simulation, and QEP-driven zero-noise extrapolation"};
    app.require_subcommand(1);
    auto* gen = app.add_subcommand("gen-trotter", "generate a Trotterized Ising circuit");
    auto* qep_cmd = app.add_subcommand("qep", "per-qubit error probability report");
    auto* zne_cmd = app.add_subcommand("zne", "zero-noise extrapolation");
    auto* sim_cmd = app.add_subcommand("simulate", "noisy simulation of a circuit");
    gen->allow_extras();
    qep_cmd->allow_extras();
    zne_cmd->allow_extras();
    sim_cmd->allow_extras();

    try {
        if (argv.empty()) {
            std::cerr << app.help();
            return 1;
        }
        std::vector<std::string> rest(argv.begin() + 1, argv.end());
        CLI::App sub;
        // long-form help only: '--h' is the transverse-field option
        sub.set_help_flag("--help", "print help");
        try {
            if (argv[0] == "gen-trotter") return cmd_gen_trotter(sub, rest);
            if (argv[0] == "qep") return cmd_qep(sub, rest);
            if (argv[0] == "zne") return cmd_zne(sub, rest);
            if (argv[0] == "simulate") return cmd_simulate(sub, rest);
            std::cerr << "unknown command '" << argv[0] << "'\n" << app.help();
            return 1;
        } catch (const CLI::CallForHelp&) {
            std::cout << sub.help();
            return 0;
        } catch (const CLI::ParseError& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const CalibError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const CircuitError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace qepzne::cli

#include "qepzne/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qepzne {

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::RZ: return "rz";
        case GateKind::SX: return "sx";
        case GateKind::X: return "x";
        case GateKind::CZ: return "cz";
        case GateKind::RZZ: return "rzz";
        case GateKind::RX: return "rx";
        case GateKind::MEASURE: return "measure";
    }
    return "?";
}

bool is_two_qubit(GateKind k) { return k == GateKind::CZ || k == GateKind::RZZ; }

bool has_angle(GateKind k) {
    return k == GateKind::RZ || k == GateKind::RZZ || k == GateKind::RX;
}

bool Instruction::operator==(const Instruction& o) const {
    if (kind != o.kind || q0 != o.q0) return false;
    if (is_two_qubit(kind) && q1 != o.q1) return false;
    if (has_angle(kind) && theta != o.theta) return false;
    return true;
}

void Circuit::check_qubit(uint32_t q) const {
    if (q >= n_qubits)
        throw CircuitError("qubit index " + std::to_string(q) + " out of range (n_qubits=" +
                           std::to_string(n_qubits) + ")");
}

void Circuit::check_not_measured(uint32_t q) const {
    if (q < measured_.size() && measured_[q])
        throw CircuitError("gate on qubit " + std::to_string(q) + " after its measurement");
}

void Circuit::rz(uint32_t q, double theta) {
    check_qubit(q);
    check_not_measured(q);
    instructions.push_back({GateKind::RZ, q, 0, theta});
}

void Circuit::sx(uint32_t q) {
    check_qubit(q);
    check_not_measured(q);
    instructions.push_back({GateKind::SX, q, 0, 0.0});
}

void Circuit::x(uint32_t q) {
    check_qubit(q);
    check_not_measured(q);
    instructions.push_back({GateKind::X, q, 0, 0.0});
}

void Circuit::cz(uint32_t a, uint32_t b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw CircuitError("cz requires two distinct qubits, got " + std::to_string(a));
    check_not_measured(a);
    check_not_measured(b);
    instructions.push_back({GateKind::CZ, a, b, 0.0});
}

void Circuit::rzz(uint32_t a, uint32_t b, double theta) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw CircuitError("rzz requires two distinct qubits, got " + std::to_string(a));
    check_not_measured(a);
    check_not_measured(b);
    instructions.push_back({GateKind::RZZ, a, b, theta});
}

void Circuit::rx(uint32_t q, double theta) {
    check_qubit(q);
    check_not_measured(q);
    instructions.push_back({GateKind::RX, q, 0, theta});
}

void Circuit::measure(uint32_t q) {
    check_qubit(q);
    if (measured_.size() < n_qubits) measured_.resize(n_qubits, 0);
    if (measured_[q]) throw CircuitError("qubit " + std::to_string(q) + " measured twice");
    measured_[q] = 1;
    instructions.push_back({GateKind::MEASURE, q, 0, 0.0});
}

std::vector<uint32_t> Circuit::measured_qubits() const {
    std::vector<uint32_t> out;
    for (const auto& ins : instructions)
        if (ins.kind == GateKind::MEASURE) out.push_back(ins.q0);
    return out;
}

std::vector<std::pair<uint32_t, uint32_t>> Circuit::used_edges() const {
    std::set<std::pair<uint32_t, uint32_t>> edges;
    for (const auto& ins : instructions)
        if (is_two_qubit(ins.kind))
            edges.insert({std::min(ins.q0, ins.q1), std::max(ins.q0, ins.q1)});
    return {edges.begin(), edges.end()};
}

size_t Circuit::gate_count() const {
    size_t n = 0;
    for (const auto& ins : instructions)
        if (ins.kind != GateKind::MEASURE) ++n;
    return n;
}

bool Circuit::operator==(const Circuit& o) const {
    return n_qubits == o.n_qubits && native == o.native && instructions == o.instructions;
}

std::vector<std::pair<uint32_t, uint32_t>> TrotterParams::chain(uint32_t n) {
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return edges;
}

Circuit build_trotter_ising(const TrotterParams& params) {
    if (params.n_qubits == 0) throw CircuitError("n_qubits must be >= 1");
    if (params.steps == 0) throw CircuitError("steps must be >= 1");
    if (!(params.dt > 0)) throw CircuitError("dt must be > 0");
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (auto [a, b] : params.topology) {
        if (a >= b) throw CircuitError("topology edge must have i < j");
        if (b >= params.n_qubits)
            throw CircuitError("topology edge (" + std::to_string(a) + "," + std::to_string(b) +
                               ") references qubit >= n_qubits");
        if (!seen.insert({a, b}).second) throw CircuitError("duplicate topology edge");
    }

    Circuit c;
    c.n_qubits = params.n_qubits;
    const double zz_angle = -2.0 * params.coupling * params.dt;
    const double x_angle = 2.0 * params.transverse_field * params.dt;
    for (uint32_t s = 0; s < params.steps; ++s) {
        for (auto [a, b] : params.topology) c.rzz(a, b, zz_angle);
        for (uint32_t q = 0; q < params.n_qubits; ++q) c.rx(q, x_angle);
    }
    for (uint32_t q = 0; q < params.n_qubits; ++q) c.measure(q);
    return c;
}

Circuit prune_identity(const Circuit& c) {
    Circuit out;
    out.n_qubits = c.n_qubits;
    out.native = c.native;
    for (const auto& ins : c.instructions) {
        if ((ins.kind == GateKind::RZ || ins.kind == GateKind::RX) && ins.theta == 0.0) continue;
        out.instructions.push_back(ins);
    }
    return out;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// H up to global phase.
void emit_hadamard(Circuit& out, uint32_t q) {
    out.rz(q, kPi / 2);
    out.sx(q);
    out.rz(q, kPi / 2);
}

void emit_rx(Circuit& out, uint32_t q, double theta) {
    // rx(theta) ~ rz(pi/2) sx rz(theta+pi) sx rz(pi/2) up to global phase
    out.rz(q, kPi / 2);
    out.sx(q);
    out.rz(q, theta + kPi);
    out.sx(q);
    out.rz(q, kPi / 2);
}

void emit_rzz(Circuit& out, uint32_t a, uint32_t b, double theta) {
    // rzz(theta) = cnot(a,b) rz_b(theta) cnot(a,b), cnot = H_b cz H_b
    emit_hadamard(out, b);
    out.cz(a, b);
    emit_hadamard(out, b);
    out.rz(b, theta);
    emit_hadamard(out, b);
    out.cz(a, b);
    emit_hadamard(out, b);
}

}  // namespace

Circuit decompose_to_native(const Circuit& c) {
    if (c.native) return c;
    Circuit out;
    out.n_qubits = c.n_qubits;
    bool logical_seen = false;
    for (const auto& ins : c.instructions) {
        switch (ins.kind) {
            case GateKind::RZZ:
                emit_rzz(out, ins.q0, ins.q1, ins.theta);
                logical_seen = true;
                break;
            case GateKind::RX:
                emit_rx(out, ins.q0, ins.theta);
                logical_seen = true;
                break;
            case GateKind::MEASURE:
                out.measure(ins.q0);
                break;
            default:
                out.instructions.push_back(ins);
        }
    }
    out.native = true;
    if (!logical_seen) {
        // already native in content; return the input with the flag set
        Circuit same = c;
        same.native = true;
        return same;
    }
    return out;
}

ParseError::ParseError(size_t line, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_number(line) {}

std::string serialize(const Circuit& c) {
    std::ostringstream os;
    os.precision(17);
    os << "qubits " << c.n_qubits << "\n";
    for (const auto& ins : c.instructions) {
        os << gate_name(ins.kind);
        os << " " << ins.q0;
        if (is_two_qubit(ins.kind)) os << " " << ins.q1;
        if (has_angle(ins.kind)) os << " " << ins.theta;
        os << "\n";
    }
    return os.str();
}

Circuit parse_circuit(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    bool have_header = false;
    Circuit c;
    bool all_native = true;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank
        try {
            if (!have_header) {
                if (tok != "qubits") throw ParseError(lineno, "expected 'qubits N' header");
                long n;
                if (!(ls >> n) || n < 0) throw ParseError(lineno, "bad qubit count");
                c.n_qubits = static_cast<uint32_t>(n);
                have_header = true;
                continue;
            }
            auto read_q = [&]() {
                long q;
                if (!(ls >> q) || q < 0) throw ParseError(lineno, "bad qubit index");
                return static_cast<uint32_t>(q);
            };
            auto read_theta = [&]() {
                double t;
                if (!(ls >> t)) throw ParseError(lineno, "bad angle");
                return t;
            };
            if (tok == "rz") {
                uint32_t q = read_q();
                c.rz(q, read_theta());
            } else if (tok == "sx") {
                c.sx(read_q());
            } else if (tok == "x") {
                c.x(read_q());
            } else if (tok == "cz") {
                uint32_t a = read_q(), b = read_q();
                if (a == b) throw ParseError(lineno, "duplicate qubit in cz");
                c.cz(a, b);
            } else if (tok == "rzz") {
                uint32_t a = read_q(), b = read_q();
                if (a == b) throw ParseError(lineno, "duplicate qubit in rzz");
                c.rzz(a, b, read_theta());
                all_native = false;
            } else if (tok == "rx") {
                uint32_t q = read_q();
                c.rx(q, read_theta());
                all_native = false;
            } else if (tok == "measure") {
                c.measure(read_q());
            } else {
                throw ParseError(lineno, "unknown instruction '" + tok + "'");
            }
            std::string extra;
            if (ls >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
        } catch (const CircuitError& e) {
            throw ParseError(lineno, e.what());
        }
    }
    if (!have_header) throw ParseError(lineno, "missing 'qubits N' header");
    c.native = all_native;
    return c;
}

}  // namespace qepzne

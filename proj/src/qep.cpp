#include "qepzne/qep.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qepzne {

namespace {

double gate_duration(const CalibrationSnapshot& s, const Instruction& ins) {
    if (ins.kind == GateKind::CZ) {
        const EdgeCalib* e = s.find_edge(ins.q0, ins.q1);
        if (!e)
            throw ScheduleError("no calibration edge for cz " + std::to_string(ins.q0) + "-" +
                                std::to_string(ins.q1));
        return e->cz_duration_ns;
    }
    const auto* g = s.find_gate(ins.q0, gate_name(ins.kind));
    if (!g)
        throw ScheduleError(std::string("no duration for gate '") + gate_name(ins.kind) +
                            "' on qubit " + std::to_string(ins.q0));
    return g->duration_ns;
}

}  // namespace

Schedule schedule(const Circuit& c, const CalibrationSnapshot& s) {
    if (!c.native) throw ScheduleError("schedule requires a native circuit");
    if (s.qubits.size() < c.n_qubits)
        throw ScheduleError("snapshot covers fewer qubits than the circuit");
    Schedule sch;
    sch.qubit_time_ns.assign(c.n_qubits, 0.0);
    sch.qubit_total_ns.assign(c.n_qubits, 0.0);
    sch.instructions.reserve(c.instructions.size());
    std::vector<double>& t = sch.qubit_time_ns;
    for (const auto& ins : c.instructions) {
        ScheduledInstr si;
        if (ins.kind == GateKind::MEASURE) {
            // readout extends the wall-clock time but not the decay time t_j
            si.start_ns = t[ins.q0];
            si.end_ns = si.start_ns + s.qubits[ins.q0].readout_ns;
            sch.qubit_total_ns[ins.q0] = si.end_ns;
        } else if (ins.kind == GateKind::CZ) {
            double d = gate_duration(s, ins);
            si.start_ns = std::max(t[ins.q0], t[ins.q1]);
            si.end_ns = si.start_ns + d;
            t[ins.q0] = t[ins.q1] = si.end_ns;
        } else {
            double d = gate_duration(s, ins);
            si.start_ns = t[ins.q0];
            si.end_ns = si.start_ns + d;
            t[ins.q0] = si.end_ns;
        }
        sch.instructions.push_back(si);
    }
    for (uint32_t q = 0; q < c.n_qubits; ++q)
        sch.qubit_total_ns[q] = std::max(sch.qubit_total_ns[q], t[q]);
    return sch;
}

QepReport qep(const Circuit& c, const CalibrationSnapshot& s, bool include_measurement) {
    Schedule sch = schedule(c, s);
    const uint32_t n = c.n_qubits;

    // Attribution: per qubit, the ordered set of gate-instance indices whose
    // error feeds into that qubit's product. Two-qubit gates union both sets.
    std::vector<std::set<uint32_t>> attributed(n);
    for (uint32_t idx = 0; idx < c.instructions.size(); ++idx) {
        const auto& ins = c.instructions[idx];
        if (ins.kind == GateKind::MEASURE) continue;
        if (ins.kind == GateKind::CZ) {
            auto &a = attributed[ins.q0], &b = attributed[ins.q1];
            a.insert(idx);
            a.insert(b.begin(), b.end());
            b = a;
        } else {
            attributed[ins.q0].insert(idx);
        }
    }

    auto gate_error = [&](uint32_t idx) -> double {
        const auto& ins = c.instructions[idx];
        if (ins.kind == GateKind::CZ) {
            const EdgeCalib* e = s.find_edge(ins.q0, ins.q1);
            if (!e || !e->cz_error) return 1.0;  // MISSING -> certain error
            return *e->cz_error;
        }
        const auto* g = s.find_gate(ins.q0, gate_name(ins.kind));
        return g ? g->error : 0.0;
    };

    QepReport r;
    r.include_measurement = include_measurement;
    r.p.resize(n);
    r.t_ns = sch.qubit_time_ns;
    auto measured_list = c.measured_qubits();
    std::set<uint32_t> measured(measured_list.begin(), measured_list.end());
    for (uint32_t q = 0; q < n; ++q) {
        const auto& qc = s.qubits[q];
        const double t = sch.qubit_time_ns[q];
        double success = 1.0;
        if (include_measurement && measured.count(q)) success *= 1.0 - qc.readout_error;
        // decay factors: P_tau = 1 - exp(-t/tau), so the success factor is exp(-t/tau)
        success *= std::exp(-t / (qc.t1_us * 1000.0));
        success *= std::exp(-t / (qc.t2_us * 1000.0));
        for (uint32_t idx : attributed[q]) success *= 1.0 - gate_error(idx);
        r.p[q] = std::clamp(1.0 - success, 0.0, 1.0);
    }

    double sum = 0.0;
    for (double v : r.p) sum += v;
    r.mu = n ? sum / double(n) : 0.0;
    double var = 0.0;
    for (double v : r.p) var += (v - r.mu) * (v - r.mu);
    r.sigma_sq = n ? var / double(n) : 0.0;
    r.sigma = std::sqrt(r.sigma_sq);
    r.warnings = warnings_for(c, s);
    return r;
}

std::string qep_report_csv(const QepReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << "qubit,p_error,t_ns\n";
    for (size_t q = 0; q < r.p.size(); ++q)
        os << q << "," << r.p[q] << "," << r.t_ns[q] << "\n";
    os << "mu," << r.mu << "\n";
    os << "sigma," << r.sigma << "\n";
    os << "sigma_sq," << r.sigma_sq << "\n";
    return os.str();
}

}  // namespace qepzne

#include "qepzne/noise.hpp"

#include <cmath>

namespace qepzne {

namespace {

NoiseOp decay_op(const QubitCalib& qc, uint32_t q, double dt_ns) {
    const double t1_ns = qc.t1_us * 1000.0;
    const double t2_ns = qc.t2_us * 1000.0;
    const double inv_tphi = std::max(0.0, 1.0 / t2_ns - 1.0 / (2.0 * t1_ns));
    NoiseOp op;
    op.type = NoiseOp::Type::DECAY;
    op.q0 = q;
    op.gamma = 1.0 - std::exp(-dt_ns / t1_ns);
    op.lambda = -std::expm1(-dt_ns * inv_tphi);
    return op;
}

}  // namespace

NoiseModel build_noise_model(const Circuit& c, const CalibrationSnapshot& s,
                             const Schedule& sched) {
    if (!c.native) throw NoiseError("noise model requires a native circuit");
    if (sched.instructions.size() != c.instructions.size())
        throw NoiseError("schedule does not match circuit");

    NoiseModel nm;
    std::vector<double> clock(c.n_qubits, 0.0);  // last covered time per qubit
    for (uint32_t idx = 0; idx < c.instructions.size(); ++idx) {
        const auto& ins = c.instructions[idx];
        const auto& si = sched.instructions[idx];
        if (ins.kind == GateKind::MEASURE) {
            NoiseOp op;
            op.type = NoiseOp::Type::READOUT;
            op.q0 = ins.q0;
            op.p = s.flip_p01(ins.q0);
            op.p10 = s.flip_p10(ins.q0);
            nm.ops.push_back(op);
            continue;
        }

        NoiseOp gate;
        gate.type = NoiseOp::Type::GATE;
        gate.instr_index = idx;
        gate.q0 = ins.q0;
        gate.q1 = ins.q1;
        gate.two_qubit = is_two_qubit(ins.kind);
        nm.ops.push_back(gate);

        // decay covering [clock_q, end] for each participant: idle wait before
        // a two-qubit gate plus the gate duration itself
        for (uint32_t q : {ins.q0, ins.q1}) {
            if (q == ins.q1 && !gate.two_qubit) break;
            double dt = si.end_ns - clock[q];
            if (dt > 0) nm.ops.push_back(decay_op(s.qubits[q], q, dt));
            clock[q] = si.end_ns;
        }

        double r = 0.0;
        double d = 2.0;
        if (ins.kind == GateKind::CZ) {
            const EdgeCalib* e = s.find_edge(ins.q0, ins.q1);
            if (!e) throw NoiseError("no calibration edge for cz");
            if (!e->cz_error)
                throw NoiseError("cz " + std::to_string(e->q1) + "-" + std::to_string(e->q2) +
                                 " has no error data; repair the snapshot or drop the edge");
            r = *e->cz_error;
            d = 4.0;
        } else {
            const auto* g = s.find_gate(ins.q0, gate_name(ins.kind));
            if (g) r = g->error;
        }
        if (r > 0.0) {
            NoiseOp dep;
            dep.type = NoiseOp::Type::DEPOLARIZE;
            dep.q0 = ins.q0;
            dep.q1 = ins.q1;
            dep.two_qubit = gate.two_qubit;
            dep.p = std::min(1.0, r * d / (d - 1.0));
            nm.ops.push_back(dep);
        }
    }
    return nm;
}

}  // namespace qepzne

#pragma once

#include <vector>

#include "qepzne/calib.hpp"
#include "qepzne/circuit.hpp"
#include "qepzne/qep.hpp"

namespace qepzne {

// One entry per event in execution order. Both backends walk the same
// sequence, so they realize the same noise process.
struct NoiseOp {
    enum class Type { GATE, DEPOLARIZE, DECAY, READOUT } type;
    uint32_t instr_index = 0;  // GATE: index into circuit instructions
    uint32_t q0 = 0, q1 = 0;   // DEPOLARIZE may act on one or two qubits
    bool two_qubit = false;
    double p = 0.0;        // DEPOLARIZE probability / READOUT p01
    double p10 = 0.0;      // READOUT only
    double gamma = 0.0;    // DECAY: relaxation probability over the interval
    double lambda = 0.0;   // DECAY: pure-dephasing probability over the interval
};

struct NoiseModel {
    std::vector<NoiseOp> ops;
};

struct NoiseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Depolarizing after each gate with p = r*d/(d-1) (reported error read as
// average gate infidelity); relaxation gamma = 1 - exp(-dt/T1) and pure
// dephasing lambda = 1 - exp(-dt/Tphi), 1/Tphi = max(0, 1/T2 - 1/(2 T1)),
// applied per qubit over each scheduled interval (idle wait plus gate
// duration); symmetric readout flips at measurement. MISSING cz errors are
// rejected here.
NoiseModel build_noise_model(const Circuit& c, const CalibrationSnapshot& s,
                             const Schedule& sched);

}  // namespace qepzne

#pragma once

#include <vector>

#include "qepzne/noise.hpp"

namespace qepzne {

struct ObservableEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    uint64_t shots = 0;  // 0 for exact backends
};

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PerQubitZ {
    std::vector<double> z;       // <Z_i> per qubit
    std::vector<double> stderr_; // zero for exact backends
    uint64_t shots = 0;
};

struct DmOptions {
    // Replace amplitude/phase damping by their Pauli twirls, matching the
    // stabilizer backend's channels exactly (used for cross-validation).
    bool pauli_twirl_decay = false;
};

// Exact expectation values by density-matrix evolution; n_qubits <= 10.
PerQubitZ run_density_matrix(const Circuit& c, const NoiseModel& nm,
                             const DmOptions& opt = {});

struct StabOptions {
    unsigned threads = 1;  // 0 = hardware concurrency
};

// Stochastic Pauli-frame sampling over a tableau reference run. Requires
// every gate to be Clifford (rotation angles multiples of pi/2 within
// 1e-9). Deterministic for a fixed seed, independent of thread count.
PerQubitZ run_stabilizer(const Circuit& c, const NoiseModel& nm, uint64_t shots,
                         uint64_t seed, const StabOptions& opt = {});

ObservableEstimate magnetization(const PerQubitZ& z);

}  // namespace qepzne

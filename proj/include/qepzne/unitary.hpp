#pragma once

#include <complex>
#include <vector>

#include "qepzne/circuit.hpp"

namespace qepzne {

// Dense 2^n x 2^n matrix, row-major, qubit 0 = least-significant bit.
struct Unitary {
    uint32_t n_qubits = 0;
    std::vector<std::complex<double>> m;  // dim*dim, row-major

    size_t dim() const { return size_t(1) << n_qubits; }
    std::complex<double>& at(size_t r, size_t c) { return m[r * dim() + c]; }
    const std::complex<double>& at(size_t r, size_t c) const { return m[r * dim() + c]; }

    static Unitary identity(uint32_t n_qubits);
    bool is_unitary(double tol = 1e-10) const;
};

// Product of instruction matrices in order; measure instructions ignored.
// Rejects n_qubits > 10.
Unitary unitary_of(const Circuit& c);

// max_ij |a_ij - phase*b_ij| minimized over global phase.
double distance_up_to_phase(const Unitary& a, const Unitary& b);

// Apply a circuit to a statevector (qubit 0 = LSB). Measures ignored.
void apply_circuit(const Circuit& c, std::vector<std::complex<double>>& state);

}  // namespace qepzne

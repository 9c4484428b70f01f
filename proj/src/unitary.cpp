#include "qepzne/unitary.hpp"

#include <array>
#include <cmath>

namespace qepzne {

namespace {

using cplx = std::complex<double>;

std::array<cplx, 4> single_qubit_matrix(const Instruction& ins) {
    const cplx i(0.0, 1.0);
    switch (ins.kind) {
        case GateKind::RZ: {
            double t = ins.theta;
            return {std::exp(-i * (t / 2)), 0.0, 0.0, std::exp(i * (t / 2))};
        }
        case GateKind::SX:
            // sqrt(X): 0.5*[[1+i, 1-i], [1-i, 1+i]]
            return {0.5 * (1.0 + i), 0.5 * (1.0 - i), 0.5 * (1.0 - i), 0.5 * (1.0 + i)};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::RX: {
            double t = ins.theta;
            cplx c = std::cos(t / 2), s = -i * std::sin(t / 2);
            return {c, s, s, c};
        }
        default:
            throw CircuitError("not a single-qubit gate");
    }
}

void apply_single(std::vector<cplx>& state, uint32_t q, const std::array<cplx, 4>& u) {
    const size_t mask = size_t(1) << q;
    const size_t dim = state.size();
    for (size_t k = 0; k < dim; ++k) {
        if (k & mask) continue;
        cplx a = state[k], b = state[k | mask];
        state[k] = u[0] * a + u[1] * b;
        state[k | mask] = u[2] * a + u[3] * b;
    }
}

void apply_instruction(std::vector<cplx>& state, const Instruction& ins) {
    const cplx i(0.0, 1.0);
    switch (ins.kind) {
        case GateKind::MEASURE:
            return;
        case GateKind::CZ: {
            const size_t m = (size_t(1) << ins.q0) | (size_t(1) << ins.q1);
            for (size_t k = 0; k < state.size(); ++k)
                if ((k & m) == m) state[k] = -state[k];
            return;
        }
        case GateKind::RZZ: {
            // diag(e^{-it/2}, e^{it/2}, e^{it/2}, e^{-it/2}) on the parity of (q0,q1)
            const cplx even = std::exp(-i * (ins.theta / 2));
            const cplx odd = std::exp(i * (ins.theta / 2));
            const size_t m0 = size_t(1) << ins.q0, m1 = size_t(1) << ins.q1;
            for (size_t k = 0; k < state.size(); ++k) {
                bool parity = (bool(k & m0) != bool(k & m1));
                state[k] *= parity ? odd : even;
            }
            return;
        }
        default:
            apply_single(state, ins.q0, single_qubit_matrix(ins));
    }
}

}  // namespace

Unitary Unitary::identity(uint32_t n) {
    Unitary u;
    u.n_qubits = n;
    u.m.assign((size_t(1) << n) * (size_t(1) << n), 0.0);
    for (size_t k = 0; k < u.dim(); ++k) u.at(k, k) = 1.0;
    return u;
}

bool Unitary::is_unitary(double tol) const {
    const size_t d = dim();
    for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < d; ++c) {
            cplx acc = 0.0;
            for (size_t k = 0; k < d; ++k) acc += std::conj(at(k, r)) * at(k, c);
            cplx expect = (r == c) ? 1.0 : 0.0;
            if (std::abs(acc - expect) > tol) return false;
        }
    }
    return true;
}

void apply_circuit(const Circuit& c, std::vector<cplx>& state) {
    for (const auto& ins : c.instructions) apply_instruction(state, ins);
}

Unitary unitary_of(const Circuit& c) {
    if (c.n_qubits > 10) throw CircuitError("unitary_of supports at most 10 qubits");
    const size_t d = size_t(1) << c.n_qubits;
    Unitary u;
    u.n_qubits = c.n_qubits;
    u.m.assign(d * d, 0.0);
    std::vector<cplx> col(d);
    for (size_t j = 0; j < d; ++j) {
        std::fill(col.begin(), col.end(), cplx(0.0));
        col[j] = 1.0;
        apply_circuit(c, col);
        for (size_t r = 0; r < d; ++r) u.at(r, j) = col[r];
    }
    return u;
}

double distance_up_to_phase(const Unitary& a, const Unitary& b) {
    if (a.n_qubits != b.n_qubits) throw CircuitError("dimension mismatch");
    // pick the phase from the largest-magnitude entry of b
    size_t best = 0;
    double best_mag = -1.0;
    for (size_t k = 0; k < b.m.size(); ++k) {
        double mag = std::abs(b.m[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    cplx phase = 1.0;
    if (best_mag > 0 && std::abs(a.m[best]) > 0)
        phase = (a.m[best] / b.m[best]) / std::abs(a.m[best] / b.m[best]);
    double worst = 0.0;
    for (size_t k = 0; k < a.m.size(); ++k)
        worst = std::max(worst, std::abs(a.m[k] - phase * b.m[k]));
    return worst;
}

}  // namespace qepzne

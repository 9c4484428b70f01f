#include <array>
#include <cmath>
#include <complex>

#include "qepzne/sim.hpp"

namespace qepzne {

namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;

struct Density {
    uint32_t n;
    size_t dim;
    std::vector<cplx> rho;  // row-major dim x dim

    explicit Density(uint32_t n_qubits) : n(n_qubits), dim(size_t(1) << n_qubits) {
        rho.assign(dim * dim, 0.0);
        rho[0] = 1.0;  // |0...0><0...0|
    }

    cplx& at(size_t r, size_t c) { return rho[r * dim + c]; }

    // rho -> U rho U^dag for a single-qubit U on qubit q
    void conjugate_single(uint32_t q, const Mat2& u) {
        const size_t m = size_t(1) << q;
        // left multiply on rows
        for (size_t r = 0; r < dim; ++r) {
            if (r & m) continue;
            for (size_t c = 0; c < dim; ++c) {
                cplx a = at(r, c), b = at(r | m, c);
                at(r, c) = u[0] * a + u[1] * b;
                at(r | m, c) = u[2] * a + u[3] * b;
            }
        }
        // right multiply by U^dag on columns
        for (size_t c = 0; c < dim; ++c) {
            if (c & m) continue;
            for (size_t r = 0; r < dim; ++r) {
                cplx a = at(r, c), b = at(r, c | m);
                at(r, c) = a * std::conj(u[0]) + b * std::conj(u[1]);
                at(r, c | m) = a * std::conj(u[2]) + b * std::conj(u[3]);
            }
        }
    }

    // rho -> sum_k K_k rho K_k^dag (single-qubit Kraus set)
    void kraus_single(uint32_t q, const std::vector<Mat2>& ks) {
        std::vector<cplx> acc(dim * dim, 0.0);
        std::vector<cplx> work;
        for (const auto& k : ks) {
            work = rho;
            Density tmp(n);
            tmp.rho = std::move(work);
            tmp.conjugate_single(q, k);
            for (size_t i = 0; i < acc.size(); ++i) acc[i] += tmp.rho[i];
        }
        rho = std::move(acc);
    }

    void apply_cz(uint32_t a, uint32_t b) {
        const size_t m = (size_t(1) << a) | (size_t(1) << b);
        for (size_t r = 0; r < dim; ++r)
            for (size_t c = 0; c < dim; ++c) {
                bool fr = (r & m) == m, fc = (c & m) == m;
                if (fr != fc) at(r, c) = -at(r, c);
            }
    }

    void apply_rzz(uint32_t a, uint32_t b, double theta) {
        const cplx i(0.0, 1.0);
        const size_t ma = size_t(1) << a, mb = size_t(1) << b;
        auto ph = [&](size_t k) {
            bool parity = bool(k & ma) != bool(k & mb);
            return parity ? std::exp(i * (theta / 2)) : std::exp(-i * (theta / 2));
        };
        for (size_t r = 0; r < dim; ++r)
            for (size_t c = 0; c < dim; ++c) at(r, c) *= ph(r) * std::conj(ph(c));
    }

    double expect_z(uint32_t q) const {
        const size_t m = size_t(1) << q;
        double e = 0.0;
        for (size_t k = 0; k < dim; ++k) {
            double d = rho[k * dim + k].real();
            e += (k & m) ? -d : d;
        }
        return e;
    }
};

const Mat2 kPauliX{cplx(0), cplx(1), cplx(1), cplx(0)};
const Mat2 kPauliY{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)};
const Mat2 kPauliZ{cplx(1), cplx(0), cplx(0), cplx(-1)};

Mat2 gate_matrix(const Instruction& ins) {
    const cplx i(0.0, 1.0);
    switch (ins.kind) {
        case GateKind::RZ:
            return {std::exp(-i * (ins.theta / 2)), 0.0, 0.0, std::exp(i * (ins.theta / 2))};
        case GateKind::SX:
            return {0.5 * (1.0 + i), 0.5 * (1.0 - i), 0.5 * (1.0 - i), 0.5 * (1.0 + i)};
        case GateKind::X:
            return kPauliX;
        case GateKind::RX: {
            cplx c = std::cos(ins.theta / 2), s = -i * std::sin(ins.theta / 2);
            return {c, s, s, c};
        }
        default:
            throw SimError("unexpected gate kind");
    }
}

// rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)
void depolarize1(Density& d, uint32_t q, double p) {
    std::vector<cplx> base = d.rho;
    std::vector<cplx> acc(base.size());
    for (size_t i = 0; i < base.size(); ++i) acc[i] = (1.0 - p) * base[i];
    for (const Mat2* pauli : {&kPauliX, &kPauliY, &kPauliZ}) {
        d.rho = base;
        d.conjugate_single(q, *pauli);
        for (size_t i = 0; i < acc.size(); ++i) acc[i] += (p / 3.0) * d.rho[i];
    }
    d.rho = std::move(acc);
}

// uniform over the 15 non-identity two-qubit Paulis
void depolarize2(Density& d, uint32_t qa, uint32_t qb, double p) {
    std::vector<cplx> base = d.rho;
    std::vector<cplx> acc(base.size());
    for (size_t i = 0; i < base.size(); ++i) acc[i] = (1.0 - p) * base[i];
    const std::array<const Mat2*, 4> paulis{nullptr, &kPauliX, &kPauliY, &kPauliZ};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            d.rho = base;
            if (paulis[a]) d.conjugate_single(qa, *paulis[a]);
            if (paulis[b]) d.conjugate_single(qb, *paulis[b]);
            for (size_t i = 0; i < acc.size(); ++i) acc[i] += (p / 15.0) * d.rho[i];
        }
    d.rho = std::move(acc);
}

void pauli_mixture(Density& d, uint32_t q, double px, double py, double pz) {
    std::vector<cplx> base = d.rho;
    std::vector<cplx> acc(base.size());
    double p0 = 1.0 - px - py - pz;
    for (size_t i = 0; i < base.size(); ++i) acc[i] = p0 * base[i];
    const std::array<std::pair<const Mat2*, double>, 3> terms{
        {{&kPauliX, px}, {&kPauliY, py}, {&kPauliZ, pz}}};
    for (auto [m, w] : terms) {
        if (w == 0.0) continue;
        d.rho = base;
        d.conjugate_single(q, *m);
        for (size_t i = 0; i < acc.size(); ++i) acc[i] += w * d.rho[i];
    }
    d.rho = std::move(acc);
}

void decay_channel(Density& d, const NoiseOp& op, bool twirl) {
    if (twirl) {
        double g = op.gamma;
        double pz_relax = (2.0 - g - 2.0 * std::sqrt(1.0 - g)) / 4.0;
        pauli_mixture(d, op.q0, g / 4.0, g / 4.0, pz_relax);
        if (op.lambda > 0.0) pauli_mixture(d, op.q0, 0.0, 0.0, op.lambda / 2.0);
        return;
    }
    if (op.gamma > 0.0) {
        double g = op.gamma;
        std::vector<Mat2> ks{{cplx(1), 0, 0, std::sqrt(1.0 - g)}, {0, std::sqrt(g), 0, 0}};
        d.kraus_single(op.q0, ks);
    }
    if (op.lambda > 0.0) {
        double l = op.lambda;
        std::vector<Mat2> ks{{cplx(1), 0, 0, std::sqrt(1.0 - l)}, {0, 0, 0, std::sqrt(l)}};
        d.kraus_single(op.q0, ks);
    }
}

}  // namespace

PerQubitZ run_density_matrix(const Circuit& c, const NoiseModel& nm, const DmOptions& opt) {
    if (c.n_qubits > 10) throw SimError("density-matrix backend supports at most 10 qubits");
    Density d(c.n_qubits);
    PerQubitZ out;
    out.z.assign(c.n_qubits, 0.0);
    out.stderr_.assign(c.n_qubits, 0.0);
    std::vector<uint8_t> measured(c.n_qubits, 0);

    for (const auto& op : nm.ops) {
        switch (op.type) {
            case NoiseOp::Type::GATE: {
                const auto& ins = c.instructions.at(op.instr_index);
                if (ins.kind == GateKind::CZ)
                    d.apply_cz(ins.q0, ins.q1);
                else if (ins.kind == GateKind::RZZ)
                    d.apply_rzz(ins.q0, ins.q1, ins.theta);
                else
                    d.conjugate_single(ins.q0, gate_matrix(ins));
                break;
            }
            case NoiseOp::Type::DEPOLARIZE:
                if (op.two_qubit)
                    depolarize2(d, op.q0, op.q1, op.p);
                else
                    depolarize1(d, op.q0, op.p);
                break;
            case NoiseOp::Type::DECAY:
                decay_channel(d, op, opt.pauli_twirl_decay);
                break;
            case NoiseOp::Type::READOUT: {
                // classical flips on the readout record:
                // <Z>' = (1 - p01 - p10) <Z> + (p10 - p01)
                double z = d.expect_z(op.q0);
                out.z[op.q0] = (1.0 - op.p - op.p10) * z + (op.p10 - op.p);
                measured[op.q0] = 1;
                break;
            }
        }
    }
    for (uint32_t q = 0; q < c.n_qubits; ++q)
        if (!measured[q]) out.z[q] = d.expect_z(q);
    return out;
}

ObservableEstimate magnetization(const PerQubitZ& z) {
    ObservableEstimate m;
    m.shots = z.shots;
    for (double v : z.z) m.value += v;
    double ss = 0.0;
    for (double s : z.stderr_) ss += s * s;
    m.stderr_ = std::sqrt(ss);
    return m;
}

}  // namespace qepzne

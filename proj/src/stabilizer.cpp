#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>

#include "qepzne/rng.hpp"
#include "qepzne/sim.hpp"

namespace qepzne {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Native Clifford ops compiled from instructions.
struct FrameOp {
    enum class Kind : uint8_t {
        S,        // rz(pi/2) or rz(3pi/2): z ^= x on the frame
        SX,       // x ^= z
        CZ,       // z_a ^= x_b, z_b ^= x_a
        NOP,      // rz(0)/rz(pi)/x: no frame action
        MEASURE,  // q0 = qubit
        DEPOL1,
        DEPOL2,
        DECAY
    } kind;
    uint32_t q0 = 0, q1 = 0;
    double p = 0.0;       // DEPOL*, or DECAY gamma
    double lambda = 0.0;  // DECAY
    double p01 = 0.0, p10 = 0.0;  // MEASURE readout flips
};

// Aaronson-Gottesman tableau over 2n rows (destabilizers then
// stabilizers) plus a scratch row, bit-packed.
class Tableau {
  public:
    explicit Tableau(uint32_t n) : n_(n), words_((n + 63) / 64) {
        x_.assign((2 * n_ + 1) * words_, 0);
        z_.assign((2 * n_ + 1) * words_, 0);
        r_.assign(2 * n_ + 1, 0);
        for (uint32_t i = 0; i < n_; ++i) {
            set_x(i, i, true);          // destabilizer X_i
            set_z(n_ + i, i, true);     // stabilizer Z_i
        }
    }

    void h(uint32_t q) {
        for (uint32_t i = 0; i < 2 * n_; ++i) {
            bool xb = get_x(i, q), zb = get_z(i, q);
            r_[i] ^= xb && zb;
            set_x(i, q, zb);
            set_z(i, q, xb);
        }
    }

    void s(uint32_t q) {
        for (uint32_t i = 0; i < 2 * n_; ++i) {
            bool xb = get_x(i, q), zb = get_z(i, q);
            r_[i] ^= xb && zb;
            set_z(i, q, zb ^ xb);
        }
    }

    void cnot(uint32_t c, uint32_t t) {
        for (uint32_t i = 0; i < 2 * n_; ++i) {
            bool xc = get_x(i, c), zc = get_z(i, c);
            bool xt = get_x(i, t), zt = get_z(i, t);
            r_[i] ^= xc && zt && (xt == zc);
            set_x(i, t, xt ^ xc);
            set_z(i, c, zc ^ zt);
        }
    }

    // Z-basis measurement; returns the outcome and whether it was random.
    std::pair<bool, bool> measure(uint32_t q, CounterRng& rng) {
        uint32_t p = 2 * n_;
        for (uint32_t i = n_; i < 2 * n_; ++i)
            if (get_x(i, q)) {
                p = i;
                break;
            }
        if (p < 2 * n_) {  // random outcome
            for (uint32_t i = 0; i < 2 * n_; ++i)
                if (i != p && get_x(i, q)) rowsum(i, p);
            copy_row(p - n_, p);
            zero_row(p);
            set_z(p, q, true);
            r_[p] = rng.bernoulli(0.5);
            return {r_[p] != 0, true};
        }
        // deterministic: accumulate into the scratch row
        zero_row(2 * n_);
        r_[2 * n_] = 0;
        for (uint32_t i = 0; i < n_; ++i)
            if (get_x(i, q)) rowsum(2 * n_, i + n_);
        return {r_[2 * n_] != 0, false};
    }

  private:
    uint32_t n_, words_;
    std::vector<uint64_t> x_, z_;
    std::vector<uint8_t> r_;

    bool get_x(uint32_t row, uint32_t q) const {
        return (x_[row * words_ + q / 64] >> (q % 64)) & 1;
    }
    bool get_z(uint32_t row, uint32_t q) const {
        return (z_[row * words_ + q / 64] >> (q % 64)) & 1;
    }
    void set_x(uint32_t row, uint32_t q, bool v) {
        uint64_t m = uint64_t(1) << (q % 64);
        auto& w = x_[row * words_ + q / 64];
        w = v ? (w | m) : (w & ~m);
    }
    void set_z(uint32_t row, uint32_t q, bool v) {
        uint64_t m = uint64_t(1) << (q % 64);
        auto& w = z_[row * words_ + q / 64];
        w = v ? (w | m) : (w & ~m);
    }
    void copy_row(uint32_t dst, uint32_t src) {
        std::memcpy(&x_[dst * words_], &x_[src * words_], words_ * 8);
        std::memcpy(&z_[dst * words_], &z_[src * words_], words_ * 8);
        r_[dst] = r_[src];
    }
    void zero_row(uint32_t row) {
        std::memset(&x_[row * words_], 0, words_ * 8);
        std::memset(&z_[row * words_], 0, words_ * 8);
        r_[row] = 0;
    }

    // row h *= row i, with the standard phase bookkeeping (g function)
    void rowsum(uint32_t h, uint32_t i) {
        int phase = 2 * (r_[h] + r_[i]);
        for (uint32_t q = 0; q < n_; ++q) {
            int x1 = get_x(i, q), z1 = get_z(i, q);
            int x2 = get_x(h, q), z2 = get_z(h, q);
            // g(x1,z1,x2,z2)
            if (x1 == 1 && z1 == 0)
                phase += z2 * (2 * x2 - 1);
            else if (x1 == 1 && z1 == 1)
                phase += z2 - x2;
            else if (x1 == 0 && z1 == 1)
                phase += x2 * (1 - 2 * z2);
            set_x(h, q, x2 ^ x1);
            set_z(h, q, z2 ^ z1);
        }
        r_[h] = ((phase % 4) + 4) % 4 == 2;
    }
};

struct CompiledCircuit {
    uint32_t n_qubits;
    std::vector<FrameOp> ops;            // gates + noise + measures, in order
    std::vector<uint32_t> measured;      // measure order (qubit ids)
};

int clifford_quarter_turns(double theta, uint32_t instr_index, const char* name) {
    double k = theta / (kPi / 2);
    double rounded = std::round(k);
    if (std::abs(theta - rounded * (kPi / 2)) > 1e-9)
        throw SimError("instruction " + std::to_string(instr_index) + " (" + name +
                       "): angle " + std::to_string(theta) + " is not Clifford");
    return int(((long(rounded) % 4) + 4) % 4);
}

CompiledCircuit compile_clifford(const Circuit& c, const NoiseModel& nm) {
    CompiledCircuit cc;
    cc.n_qubits = c.n_qubits;
    for (const auto& op : nm.ops) {
        switch (op.type) {
            case NoiseOp::Type::GATE: {
                const auto& ins = c.instructions.at(op.instr_index);
                switch (ins.kind) {
                    case GateKind::RZ: {
                        int k = clifford_quarter_turns(ins.theta, op.instr_index, "rz");
                        if (k == 1 || k == 3)
                            cc.ops.push_back({FrameOp::Kind::S, ins.q0});
                        else
                            cc.ops.push_back({FrameOp::Kind::NOP, ins.q0});
                        // tableau replay distinguishes k; keep it in p
                        cc.ops.back().p = k;
                        break;
                    }
                    case GateKind::SX:
                        cc.ops.push_back({FrameOp::Kind::SX, ins.q0});
                        break;
                    case GateKind::X: {
                        FrameOp f{FrameOp::Kind::NOP, ins.q0};
                        f.p = -1;  // marks a physical X for the tableau replay
                        cc.ops.push_back(f);
                        break;
                    }
                    case GateKind::CZ:
                        cc.ops.push_back({FrameOp::Kind::CZ, ins.q0, ins.q1});
                        break;
                    default:
                        throw SimError(
                            "stabilizer backend requires a native circuit; instruction " +
                            std::to_string(op.instr_index) + " is " +
                            gate_name(ins.kind));
                }
                break;
            }
            case NoiseOp::Type::DEPOLARIZE: {
                FrameOp f{op.two_qubit ? FrameOp::Kind::DEPOL2 : FrameOp::Kind::DEPOL1, op.q0,
                          op.q1};
                f.p = op.p;
                cc.ops.push_back(f);
                break;
            }
            case NoiseOp::Type::DECAY: {
                FrameOp f{FrameOp::Kind::DECAY, op.q0};
                f.p = op.gamma;
                f.lambda = op.lambda;
                cc.ops.push_back(f);
                break;
            }
            case NoiseOp::Type::READOUT: {
                FrameOp f{FrameOp::Kind::MEASURE, op.q0};
                f.p01 = op.p;
                f.p10 = op.p10;
                cc.ops.push_back(f);
                cc.measured.push_back(op.q0);
                break;
            }
        }
    }
    return cc;
}

// Noiseless tableau replay producing the reference outcome per measurement.
std::vector<uint8_t> reference_sample(const CompiledCircuit& cc, uint64_t seed) {
    Tableau t(cc.n_qubits);
    CounterRng rng(seed, ~uint64_t(0));
    std::vector<uint8_t> ref(cc.n_qubits, 0);
    for (const auto& op : cc.ops) {
        switch (op.kind) {
            case FrameOp::Kind::S: {
                int k = int(op.p);
                for (int j = 0; j < k; ++j) t.s(op.q0);
                break;
            }
            case FrameOp::Kind::NOP: {
                if (op.p == -1) {  // X = H S S H
                    t.h(op.q0);
                    t.s(op.q0);
                    t.s(op.q0);
                    t.h(op.q0);
                } else {
                    int k = int(op.p);  // rz(k * pi/2), k in {0, 2}
                    for (int j = 0; j < k; ++j) t.s(op.q0);
                }
                break;
            }
            case FrameOp::Kind::SX:  // sqrt(X) = S^dag H S^dag, S^dag = SSS
                for (int j = 0; j < 3; ++j) t.s(op.q0);
                t.h(op.q0);
                for (int j = 0; j < 3; ++j) t.s(op.q0);
                break;
            case FrameOp::Kind::CZ:
                t.h(op.q1);
                t.cnot(op.q0, op.q1);
                t.h(op.q1);
                break;
            case FrameOp::Kind::MEASURE:
                ref[op.q0] = t.measure(op.q0, rng).first;
                break;
            default:
                break;  // noise ops do not touch the reference
        }
    }
    return ref;
}

// Pauli frame for one shot: x/z bitsets per qubit (signs irrelevant).
struct Frame {
    std::vector<uint64_t> x, z;
    uint32_t words;

    Frame(uint32_t n, CounterRng& rng) : words((n + 63) / 64) {
        x.assign(words, 0);
        // random stabilizer of |0...0> so random-outcome measurements
        // decorrelate across shots
        z.resize(words);
        for (uint32_t w = 0; w < words; ++w) z[w] = rng.next_u64();
        uint32_t rem = n % 64;
        if (rem) z[words - 1] &= (uint64_t(1) << rem) - 1;
    }

    bool get(std::vector<uint64_t>& v, uint32_t q) const { return (v[q / 64] >> (q % 64)) & 1; }
    void fx(uint32_t q) { x[q / 64] ^= uint64_t(1) << (q % 64); }
    void fz(uint32_t q) { z[q / 64] ^= uint64_t(1) << (q % 64); }
    bool bx(uint32_t q) const { return (x[q / 64] >> (q % 64)) & 1; }
    bool bz(uint32_t q) const { return (z[q / 64] >> (q % 64)) & 1; }
};

void run_shot(const CompiledCircuit& cc, const std::vector<uint8_t>& ref, uint64_t seed,
              uint64_t shot, std::vector<uint64_t>& one_counts) {
    CounterRng rng(seed, shot);
    Frame f(cc.n_qubits, rng);
    for (const auto& op : cc.ops) {
        switch (op.kind) {
            case FrameOp::Kind::S:
                if (f.bx(op.q0)) f.fz(op.q0);
                break;
            case FrameOp::Kind::SX:
                if (f.bz(op.q0)) f.fx(op.q0);
                break;
            case FrameOp::Kind::CZ:
                if (f.bx(op.q0)) f.fz(op.q1);
                if (f.bx(op.q1)) f.fz(op.q0);
                break;
            case FrameOp::Kind::NOP:
                break;
            case FrameOp::Kind::DEPOL1:
                if (rng.bernoulli(op.p)) {
                    switch (rng.next_below(3)) {
                        case 0: f.fx(op.q0); break;
                        case 1: f.fx(op.q0); f.fz(op.q0); break;
                        default: f.fz(op.q0);
                    }
                }
                break;
            case FrameOp::Kind::DEPOL2:
                if (rng.bernoulli(op.p)) {
                    uint64_t k = 1 + rng.next_below(15);  // 1..15, (a,b) pauli pair
                    uint32_t pa = uint32_t(k / 4), pb = uint32_t(k % 4);
                    if (pa == 1 || pa == 2) f.fx(op.q0);
                    if (pa == 2 || pa == 3) f.fz(op.q0);
                    if (pb == 1 || pb == 2) f.fx(op.q1);
                    if (pb == 2 || pb == 3) f.fz(op.q1);
                }
                break;
            case FrameOp::Kind::DECAY: {
                // Pauli twirl of amplitude damping + pure dephasing
                double g = op.p;
                if (g > 0.0) {
                    double u = rng.next_double();
                    double px = g / 4.0, py = g / 4.0;
                    double pz = (2.0 - g - 2.0 * std::sqrt(1.0 - g)) / 4.0;
                    if (u < px) {
                        f.fx(op.q0);
                    } else if (u < px + py) {
                        f.fx(op.q0);
                        f.fz(op.q0);
                    } else if (u < px + py + pz) {
                        f.fz(op.q0);
                    }
                }
                if (op.lambda > 0.0 && rng.bernoulli(op.lambda / 2.0)) f.fz(op.q0);
                break;
            }
            case FrameOp::Kind::MEASURE: {
                bool bit = (ref[op.q0] != 0) ^ f.bx(op.q0);
                double flip_p = bit ? op.p10 : op.p01;
                if (flip_p > 0.0 && rng.bernoulli(flip_p)) bit = !bit;
                if (bit) ++one_counts[op.q0];
                break;
            }
        }
    }
}

}  // namespace

PerQubitZ run_stabilizer(const Circuit& c, const NoiseModel& nm, uint64_t shots, uint64_t seed,
                         const StabOptions& opt) {
    if (shots < 1) throw SimError("shots must be >= 1");
    if (!c.native) throw SimError("stabilizer backend requires a native circuit");
    CompiledCircuit cc = compile_clifford(c, nm);
    std::vector<uint8_t> ref = reference_sample(cc, seed);

    unsigned threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = unsigned(std::min<uint64_t>(threads, shots));

    std::vector<std::vector<uint64_t>> counts(threads,
                                              std::vector<uint64_t>(c.n_qubits, 0));
    auto worker = [&](unsigned tid) {
        for (uint64_t shot = tid; shot < shots; shot += threads)
            run_shot(cc, ref, seed, shot, counts[tid]);
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    PerQubitZ out;
    out.shots = shots;
    out.z.assign(c.n_qubits, 0.0);
    out.stderr_.assign(c.n_qubits, 0.0);
    std::vector<uint8_t> measured(c.n_qubits, 0);
    for (uint32_t q : cc.measured) measured[q] = 1;
    for (uint32_t q = 0; q < c.n_qubits; ++q) {
        if (!measured[q]) continue;  // unmeasured qubits report 0 with no data
        uint64_t ones = 0;
        for (const auto& ct : counts) ones += ct[q];
        double freq = double(ones) / double(shots);
        out.z[q] = 1.0 - 2.0 * freq;
        out.stderr_[q] = 2.0 * std::sqrt(freq * (1.0 - freq) / double(shots));
    }
    return out;
}

}  // namespace qepzne

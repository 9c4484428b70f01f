#include <doctest.h>

#include <cmath>
#include <random>

#include "qepzne/mitigate.hpp"
#include "qepzne/qep.hpp"
#include "qepzne/unitary.hpp"

using namespace qepzne;

namespace {

constexpr double kPi = 3.14159265358979323846;

Circuit clifford_trotter(uint32_t n, uint32_t steps) {
    TrotterParams p;
    p.n_qubits = n;
    p.steps = steps;
    p.dt = 0.25;
    p.coupling = kPi;
    p.topology = TrotterParams::chain(n);
    return decompose_to_native(build_trotter_ising(p));
}

size_t cz_count(const Circuit& c) {
    size_t n = 0;
    for (const auto& ins : c.instructions)
        if (ins.kind == GateKind::CZ) ++n;
    return n;
}

// brute-force normal equations via explicit 2x2 inversion on long doubles
std::pair<double, double> ols_oracle(const std::vector<FitPoint>& pts) {
    long double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (const auto& p : pts) {
        a11 += p.weight;
        a12 += p.weight * p.x;
        a22 += p.weight * p.x * p.x;
        b1 += p.weight * p.y;
        b2 += p.weight * p.x * p.y;
    }
    long double det = a11 * a22 - a12 * a12;
    long double intercept = (a22 * b1 - a12 * b2) / det;
    long double slope = (a11 * b2 - a12 * b1) / det;
    return {(double)slope, (double)intercept};
}

}  // namespace

TEST_CASE("amplify: factor 0 returns the circuit unchanged") {
    Circuit c = clifford_trotter(4, 2);
    CHECK(amplify(c, 0) == c);
}

TEST_CASE("amplify: cz insertion count is 2 * factor * edges") {
    Circuit c;
    c.n_qubits = 3;
    c.cz(0, 1);
    c.cz(1, 2);
    c.measure(0);
    c.native = true;
    Circuit amplified = amplify(c, 2);
    CHECK(cz_count(amplified) == cz_count(c) + 2 * 2 * 2);
    // blocks go after the last gate and before the measurements
    CHECK(amplified.instructions.back().kind == GateKind::MEASURE);
}

TEST_CASE("amplify: local fold inserts pairs after each cz") {
    Circuit c;
    c.n_qubits = 2;
    c.cz(0, 1);
    c.sx(0);
    c.cz(0, 1);
    c.native = true;
    Circuit folded = amplify(c, 1, FoldPlacement::LOCAL);
    CHECK(cz_count(folded) == 2 + 2 * 2);
    CHECK(folded.instructions[0].kind == GateKind::CZ);
    CHECK(folded.instructions[1].kind == GateKind::CZ);
    CHECK(folded.instructions[2].kind == GateKind::CZ);
    CHECK(folded.instructions[3].kind == GateKind::SX);
}

TEST_CASE("amplify preserves the unitary up to global phase") {
    Circuit c = clifford_trotter(4, 1);
    Unitary base = unitary_of(c);
    for (uint32_t f : {1u, 2u, 3u}) {
        CHECK(distance_up_to_phase(unitary_of(amplify(c, f)), base) < 1e-10);
        CHECK(distance_up_to_phase(unitary_of(amplify(c, f, FoldPlacement::LOCAL)), base) <
              1e-10);
    }
}

TEST_CASE("amplify: negative-equivalent misuse is rejected") {
    Circuit logical;
    logical.n_qubits = 2;
    logical.rzz(0, 1, 0.5);
    CHECK_THROWS_AS(amplify(logical, 1), MitigateError);  // not native
}

TEST_CASE("readout mitigation: identity at zero flip probability") {
    SyntheticProfile prof;
    prof.readout_error = 0.0;
    CalibrationSnapshot s = synthetic_snapshot(2, prof);
    PerQubitZ raw;
    raw.z = {0.7, -0.2};
    raw.stderr_ = {0.01, 0.01};
    PerQubitZ out = readout_mitigate(raw, {0, 1}, s);
    CHECK(out.z == raw.z);
}

TEST_CASE("readout mitigation: symmetric flips rescale toward the true value") {
    SyntheticProfile prof;
    prof.readout_error = 0.05;
    CalibrationSnapshot s = synthetic_snapshot(1, prof);
    PerQubitZ raw;
    raw.z = {0.9};  // true <Z>=1 damped by (1 - 2*0.05)
    raw.stderr_ = {0.0};
    PerQubitZ out = readout_mitigate(raw, {0}, s);
    CHECK(out.z[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("readout mitigation: asymmetric flips use the affine inverse") {
    CalibrationSnapshot s = synthetic_snapshot(1, SyntheticProfile{});
    s.qubits[0].p01 = 0.02;
    s.qubits[0].p10 = 0.10;
    double true_z = 0.6;
    PerQubitZ raw;
    raw.z = {(1.0 - 0.02 - 0.10) * true_z + (0.10 - 0.02)};
    raw.stderr_ = {0.0};
    PerQubitZ out = readout_mitigate(raw, {0}, s);
    CHECK(out.z[0] == doctest::Approx(true_z).epsilon(1e-12));
}

TEST_CASE("readout mitigation: singular confusion matrix is rejected") {
    CalibrationSnapshot s = synthetic_snapshot(1, SyntheticProfile{});
    s.qubits[0].p01 = 0.5;
    s.qubits[0].p10 = 0.5;
    PerQubitZ raw;
    raw.z = {0.0};
    raw.stderr_ = {0.0};
    CHECK_THROWS_AS(readout_mitigate(raw, {0}, s), MitigateError);
}

TEST_CASE("linear fit: exact line and two-point interpolation") {
    LineFit f = linear_fit({{0.0, 3.0, 1.0}, {1.0, 1.0, 1.0}, {2.0, -1.0, 1.0}});
    CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));

    LineFit two = linear_fit({{1.0, 2.0, 1.0}, {3.0, 8.0, 1.0}});
    CHECK(two.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(two.intercept == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("linear fit: all-equal x is rejected") {
    CHECK_THROWS_AS(linear_fit({{1.0, 2.0, 1.0}, {1.0, 3.0, 1.0}}), MitigateError);
    CHECK_THROWS_AS(linear_fit({{1.0, 2.0, 1.0}}), MitigateError);
}

TEST_CASE("linear fit matches the normal-equation oracle on random instances") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<FitPoint> pts;
        size_t n = 3 + rng() % 20;
        for (size_t i = 0; i < n; ++i)
            pts.push_back({u(rng), u(rng), trial % 2 ? 1.0 : 0.1 + std::abs(u(rng))});
        auto [slope, intercept] = ols_oracle(pts);
        LineFit f = linear_fit(pts);
        CHECK(f.slope == doctest::Approx(slope).epsilon(1e-9));
        CHECK(f.intercept == doctest::Approx(intercept).epsilon(1e-9));
    }
}

TEST_CASE("linear fit intercept is invariant under affine reparameterization of x") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<FitPoint> pts, scaled;
        double a = 0.1 + std::abs(u(rng));
        for (int i = 0; i < 6; ++i) {
            FitPoint p{u(rng), u(rng), 1.0};
            pts.push_back(p);
            scaled.push_back({a * p.x, p.y, 1.0});
        }
        LineFit f = linear_fit(pts);
        LineFit g = linear_fit(scaled);
        CHECK(g.intercept == doctest::Approx(f.intercept).epsilon(1e-9));
        CHECK(g.slope == doctest::Approx(f.slope / a).epsilon(1e-9));
    }
}

TEST_CASE("mean qep of amplified circuits strictly increases with the factor") {
    CalibrationSnapshot s = synthetic_snapshot(6, SyntheticProfile{});
    Circuit c = clifford_trotter(6, 2);
    double prev = -1.0;
    for (uint32_t f : {0u, 1u, 2u, 3u}) {
        double mu = mean_qep(qep(amplify(c, f), s, false));
        CHECK(mu > prev);
        prev = mu;
    }
}

TEST_CASE("zne: noiseless run has near-zero slope and the raw intercept") {
    SyntheticProfile prof;
    prof.sq_error = prof.cz_error = prof.readout_error = 0.0;
    prof.t1_us = prof.t2_us = 1e12;
    CalibrationSnapshot s = synthetic_snapshot(5, prof);
    Circuit c = clifford_trotter(5, 2);
    ZneConfig cfg;
    cfg.backend = Backend::STABILIZER;
    cfg.axis = ZneAxis::FACTOR;  // QEP axis would collapse to equal x values
    cfg.shots = 256;
    ZneResult r = zne(c, s, cfg);
    CHECK(r.slope == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.intercept == doctest::Approx(5.0).epsilon(1e-10));
    for (const auto& p : r.points) CHECK(p.m.value == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("zne: improvement and axis comparison on a noisy clifford circuit") {
    SyntheticProfile prof;
    prof.cz_error = 0.01;
    prof.sq_error = 0.001;
    prof.t1_us = prof.t2_us = 60.0;
    CalibrationSnapshot s = synthetic_snapshot(6, prof);
    Circuit c = clifford_trotter(6, 6);
    ZneConfig cfg;
    cfg.shots = 8192;
    cfg.seed = 42;
    ZneResult qep_axis = zne(c, s, cfg);
    cfg.axis = ZneAxis::FACTOR;
    ZneResult factor_axis = zne(c, s, cfg);

    double raw = qep_axis.points[0].m.value;
    CHECK(std::abs(qep_axis.intercept - 6.0) < std::abs(raw - 6.0));
    CHECK(qep_axis.intercept != factor_axis.intercept);
    // same measurements, different x
    for (size_t i = 0; i < qep_axis.points.size(); ++i) {
        CHECK(qep_axis.points[i].m.value == factor_axis.points[i].m.value);
        CHECK(qep_axis.points[i].x != factor_axis.points[i].x);
    }
    // x on the QEP axis is the amplified circuit's mean QEP
    CHECK(qep_axis.points[1].x ==
          doctest::Approx(mean_qep(qep(amplify(c, 1), s, false))).epsilon(1e-12));
}

TEST_CASE("zne: factor-set validation") {
    CalibrationSnapshot s = synthetic_snapshot(3, SyntheticProfile{});
    Circuit c = clifford_trotter(3, 1);
    ZneConfig cfg;
    cfg.factors = {0};
    CHECK_THROWS_AS(zne(c, s, cfg), MitigateError);
    cfg.factors = {1, 2};
    CHECK_THROWS_AS(zne(c, s, cfg), MitigateError);  // raw point missing
}

TEST_CASE("zne: missing edge data is rejected with the warning text") {
    CalibrationSnapshot s = synthetic_snapshot(3, SyntheticProfile{});
    s.edges[1].cz_error.reset();
    Circuit c = clifford_trotter(3, 1);
    CHECK_THROWS_WITH_AS(zne(c, s, ZneConfig{}), doctest::Contains("MISSING_GATE_DATA"),
                         MitigateError);
}

TEST_CASE("zne csv shape") {
    SyntheticProfile prof;
    prof.sq_error = prof.cz_error = prof.readout_error = 0.0;
    prof.t1_us = prof.t2_us = 1e12;
    CalibrationSnapshot s = synthetic_snapshot(3, prof);
    Circuit c = clifford_trotter(3, 1);
    ZneConfig cfg;
    cfg.axis = ZneAxis::FACTOR;
    cfg.shots = 64;
    std::string csv = zne_csv(zne(c, s, cfg));
    CHECK(csv.find("factor,x,m,stderr\n") == 0);
    CHECK(csv.find("slope,") != std::string::npos);
    CHECK(csv.find("intercept,") != std::string::npos);
    CHECK(csv.find("axis,FACTOR") != std::string::npos);
}

#include "qepzne/mitigate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qepzne/qep.hpp"

namespace qepzne {

Circuit amplify(const Circuit& c, uint32_t factor, FoldPlacement placement) {
    if (!c.native) throw MitigateError("amplify requires a native circuit");
    if (factor == 0) return c;
    auto edges = c.used_edges();  // sorted (min, max)

    Circuit out;
    out.n_qubits = c.n_qubits;
    out.native = true;

    if (placement == FoldPlacement::LOCAL) {
        for (const auto& ins : c.instructions) {
            if (ins.kind == GateKind::MEASURE) {
                out.measure(ins.q0);
                continue;
            }
            out.instructions.push_back(ins);
            if (ins.kind == GateKind::CZ)
                for (uint32_t f = 0; f < factor; ++f) {
                    out.cz(ins.q0, ins.q1);
                    out.cz(ins.q0, ins.q1);
                }
        }
        return out;
    }

    // END placement: f blocks after the last gate, before the measurements
    size_t first_measure = c.instructions.size();
    for (size_t i = 0; i < c.instructions.size(); ++i)
        if (c.instructions[i].kind == GateKind::MEASURE) {
            first_measure = i;
            break;
        }
    for (size_t i = 0; i < first_measure; ++i) out.instructions.push_back(c.instructions[i]);
    for (uint32_t f = 0; f < factor; ++f)
        for (auto [a, b] : edges) {
            out.cz(a, b);
            out.cz(a, b);
        }
    for (size_t i = first_measure; i < c.instructions.size(); ++i) {
        const auto& ins = c.instructions[i];
        if (ins.kind == GateKind::MEASURE)
            out.measure(ins.q0);
        else
            out.instructions.push_back(ins);
    }
    return out;
}

PerQubitZ readout_mitigate(const PerQubitZ& raw, const std::vector<uint32_t>& qubits,
                           const CalibrationSnapshot& s) {
    PerQubitZ out = raw;
    for (uint32_t q : qubits) {
        double p01 = s.flip_p01(q), p10 = s.flip_p10(q);
        double denom = 1.0 - p01 - p10;
        if (denom <= 0.0)
            throw MitigateError("confusion matrix for qubit " + std::to_string(q) +
                                " is not invertible (p01 + p10 >= 1)");
        out.z[q] = (raw.z[q] - (p10 - p01)) / denom;
        out.stderr_[q] = raw.stderr_[q] / denom;
    }
    return out;
}

LineFit linear_fit(const std::vector<FitPoint>& points) {
    if (points.size() < 2) throw MitigateError("linear fit needs at least 2 points");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        if (!(p.weight > 0)) throw MitigateError("fit weights must be > 0");
        sw += p.weight;
        sx += p.weight * p.x;
        sy += p.weight * p.y;
        sxx += p.weight * p.x * p.x;
        sxy += p.weight * p.x * p.y;
    }
    double det = sw * sxx - sx * sx;
    double xspread = 0;
    for (const auto& p : points) xspread = std::max(xspread, std::abs(p.x - points[0].x));
    if (xspread == 0.0 || det == 0.0)
        throw MitigateError("linear fit needs at least 2 distinct x values");
    LineFit f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    return f;
}

ZneResult zne(const Circuit& c, const CalibrationSnapshot& s, const ZneConfig& cfg) {
    if (!c.native) throw MitigateError("zne requires a native circuit");
    if (cfg.factors.size() < 2)
        throw MitigateError("zne needs at least 2 amplification factors (including raw)");
    if (std::count(cfg.factors.begin(), cfg.factors.end(), 0u) != 1)
        throw MitigateError("zne factor set must contain 0 (raw) exactly once");

    // reject MISSING edges up front, quoting the calibration warning
    for (const auto& w : warnings_for(c, s))
        if (w.kind == WarningKind::MISSING_GATE_DATA)
            throw MitigateError(format_warning(w));

    auto measured = c.measured_qubits();
    ZneResult r;
    r.axis = cfg.axis;
    for (uint32_t f : cfg.factors) {
        Circuit amplified = amplify(c, f, cfg.fold);
        double x;
        if (cfg.axis == ZneAxis::QEP) {
            // measurement error is mitigated separately, so it is excluded
            // from the extrapolation variable
            x = mean_qep(qep(amplified, s, false));
        } else {
            x = 2.0 * f + 1.0;
        }
        PerQubitZ raw;
        if (cfg.backend == Backend::DENSITY_MATRIX) {
            Schedule sch = schedule(amplified, s);
            raw = run_density_matrix(amplified, build_noise_model(amplified, s, sch));
        } else {
            Schedule sch = schedule(amplified, s);
            StabOptions so;
            so.threads = cfg.threads;
            raw = run_stabilizer(amplified, build_noise_model(amplified, s, sch), cfg.shots,
                                 cfg.seed + f, so);
        }
        PerQubitZ corrected = readout_mitigate(raw, measured, s);
        ZnePoint pt;
        pt.factor = f;
        pt.x = x;
        pt.m = magnetization(corrected);
        r.points.push_back(pt);
    }

    std::vector<FitPoint> fit_points;
    for (const auto& p : r.points) {
        double w = 1.0;
        if (cfg.weight_by_stderr && p.m.stderr_ > 0) w = 1.0 / (p.m.stderr_ * p.m.stderr_);
        fit_points.push_back({p.x, p.m.value, w});
    }
    LineFit fit = linear_fit(fit_points);
    r.slope = fit.slope;
    r.intercept = fit.intercept;
    for (const auto& p : r.points)
        r.residuals.push_back(p.m.value - (fit.intercept + fit.slope * p.x));
    return r;
}

std::string zne_csv(const ZneResult& r) {
    std::ostringstream os;
    os.precision(12);
    os << "factor,x,m,stderr\n";
    for (const auto& p : r.points)
        os << p.factor << "," << p.x << "," << p.m.value << "," << p.m.stderr_ << "\n";
    os << "slope," << r.slope << "\n";
    os << "intercept," << r.intercept << "\n";
    os << "axis," << (r.axis == ZneAxis::QEP ? "QEP" : "FACTOR") << "\n";
    return os.str();
}

}  // namespace qepzne

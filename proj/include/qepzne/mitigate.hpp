#pragma once

#include <vector>

#include "qepzne/calib.hpp"
#include "qepzne/circuit.hpp"
#include "qepzne/sim.hpp"

namespace qepzne {

struct MitigateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FoldPlacement { END, LOCAL };

// Noise amplification: factor f appends f blocks, each one CZ pair per
// coupling edge used by the circuit (edges ordered by (min,max) qubit).
// CZ*CZ = I, so the ideal unitary is unchanged. LOCAL placement instead
// inserts the f pairs directly after each cz instruction.
Circuit amplify(const Circuit& c, uint32_t factor,
                FoldPlacement placement = FoldPlacement::END);

// Tensor-product confusion-matrix inversion for symmetric-or-asymmetric
// per-qubit readout flips: <Z>true = (<Z>raw - (p10 - p01)) / (1 - p01 - p10).
PerQubitZ readout_mitigate(const PerQubitZ& raw, const std::vector<uint32_t>& qubits,
                           const CalibrationSnapshot& s);

struct FitPoint {
    double x = 0.0, y = 0.0, weight = 1.0;
};

struct LineFit {
    double slope = 0.0, intercept = 0.0;
};

// Weighted ordinary least squares; needs >= 2 distinct x values.
LineFit linear_fit(const std::vector<FitPoint>& points);

enum class ZneAxis { QEP, FACTOR };
enum class Backend { DENSITY_MATRIX, STABILIZER };

struct ZnePoint {
    uint32_t factor = 0;
    double x = 0.0;  // mean QEP, or 2f+1 on the FACTOR axis
    ObservableEstimate m;
};

struct ZneResult {
    std::vector<ZnePoint> points;
    double slope = 0.0;
    double intercept = 0.0;  // the mitigated value
    ZneAxis axis = ZneAxis::QEP;
    std::vector<double> residuals;
};

struct ZneConfig {
    Backend backend = Backend::STABILIZER;
    std::vector<uint32_t> factors{0, 1, 2, 3};
    ZneAxis axis = ZneAxis::QEP;
    uint64_t shots = 4096;
    uint64_t seed = 0;
    FoldPlacement fold = FoldPlacement::END;
    bool weight_by_stderr = false;
    unsigned threads = 1;  // 0 = auto
};

// Runs amplify(c, f) per factor through the chosen backend with readout
// mitigation, then extrapolates the magnetization to x = 0. The QEP axis
// uses mean QEP without the measurement factor.
ZneResult zne(const Circuit& c, const CalibrationSnapshot& s, const ZneConfig& cfg);

std::string zne_csv(const ZneResult& r);

}  // namespace qepzne

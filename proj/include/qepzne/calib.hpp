#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qepzne/circuit.hpp"

namespace qepzne {

struct QubitCalib {
    double t1_us = 0.0;
    double t2_us = 0.0;
    double readout_error = 0.0;
    double readout_ns = 0.0;
    // optional asymmetric readout override; falls back to readout_error
    std::optional<double> p01;
    std::optional<double> p10;
    // kind name ("rz"/"sx"/"x") -> {error, duration_ns}
    struct GateCalib {
        double error = 0.0;
        double duration_ns = 0.0;
    };
    std::map<std::string, GateCalib> gates;
};

struct EdgeCalib {
    uint32_t q1 = 0, q2 = 0;
    std::optional<double> cz_error;  // nullopt = MISSING
    double cz_duration_ns = 0.0;
};

struct CalibrationSnapshot {
    std::string label;
    std::vector<QubitCalib> qubits;
    std::vector<EdgeCalib> edges;

    const EdgeCalib* find_edge(uint32_t a, uint32_t b) const;
    const QubitCalib::GateCalib* find_gate(uint32_t q, const std::string& kind) const;
    double flip_p01(uint32_t q) const;
    double flip_p10(uint32_t q) const;
};

enum class WarningKind { POORLY_CALIBRATED_GATE, MISSING_GATE_DATA, T2_EXCEEDS_2T1 };

struct Warning {
    WarningKind kind;
    // qubit warnings use (q, q); edge warnings use (min, max)
    uint32_t q0 = 0, q1 = 0;
    std::string detail;
};

const char* warning_kind_name(WarningKind k);
std::string format_warning(const Warning& w);

struct CalibError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the JSON calibration document. Schema violations report the
// offending field path. An edge without cz_error stays MISSING.
CalibrationSnapshot load_snapshot(const std::string& document);
std::string save_snapshot(const CalibrationSnapshot& s);

// Miscalibration checks against a native circuit:
//  - POORLY_CALIBRATED_GATE: used edge with cz_error > 2x the mean over
//    edges used by the circuit (MISSING excluded from the mean)
//  - MISSING_GATE_DATA: used edge with no cz_error
//  - T2_EXCEEDS_2T1: per offending qubit used by the circuit
std::vector<Warning> warnings_for(const Circuit& c, const CalibrationSnapshot& s);

struct SyntheticProfile {
    double t1_us = 100.0;
    double t2_us = 100.0;
    double sq_error = 3e-4;
    double cz_error = 3e-3;
    double sq_duration_ns = 50.0;
    double cz_duration_ns = 200.0;
    double readout_error = 1e-2;
    double readout_ns = 1000.0;
};

// Uniform snapshot on a linear-chain coupling of n qubits.
CalibrationSnapshot synthetic_snapshot(uint32_t n, const SyntheticProfile& profile);

}  // namespace qepzne

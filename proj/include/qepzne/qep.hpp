#pragma once

#include <vector>

#include "qepzne/calib.hpp"
#include "qepzne/circuit.hpp"

namespace qepzne {

struct ScheduledInstr {
    double start_ns = 0.0;
    double end_ns = 0.0;
};

// Per-qubit circuit times under the ASAP rule: single-qubit gates extend
// the qubit's own time; a two-qubit gate starts at the later of the two
// participants' times and both adopt the shared end time.
struct Schedule {
    std::vector<double> qubit_time_ns;        // pre-measurement busy time t_j
    std::vector<double> qubit_total_ns;       // t_j including readout duration
    std::vector<ScheduledInstr> instructions;  // parallel to circuit instructions
};

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Schedule schedule(const Circuit& c, const CalibrationSnapshot& s);

struct QepReport {
    std::vector<double> p;          // per-qubit error probability
    double mu = 0.0;                // mean over all circuit qubits
    double sigma = 0.0;             // population standard deviation
    double sigma_sq = 0.0;          // population variance
    bool include_measurement = false;
    std::vector<Warning> warnings;
    std::vector<double> t_ns;       // per-qubit pre-measurement time
};

// Per-qubit error probability: decay factors exp(-t_j/tau), an optional
// measurement factor, and one (1 - error) factor per attributed gate
// instance. Two-qubit gates merge the participants' attribution sets, so
// error sources propagate across entanglement; each gate instance counts
// at most once per qubit. A MISSING cz error forces p = 1 on every qubit
// in its propagation set.
QepReport qep(const Circuit& c, const CalibrationSnapshot& s, bool include_measurement);

inline double mean_qep(const QepReport& r) { return r.mu; }

// qep-report CSV: rows qubit,p_error,t_ns; footer mu/sigma/sigma_sq.
std::string qep_report_csv(const QepReport& r);

}  // namespace qepzne

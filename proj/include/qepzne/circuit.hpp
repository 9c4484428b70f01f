#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qepzne {

// Native basis: rz/sx/x/cz + measure. rzz/rx are logical kinds that
// decompose_to_native lowers onto the native set.
enum class GateKind : uint8_t { RZ, SX, X, CZ, RZZ, RX, MEASURE };

const char* gate_name(GateKind k);
bool is_two_qubit(GateKind k);
bool has_angle(GateKind k);

struct Instruction {
    GateKind kind;
    uint32_t q0 = 0;
    uint32_t q1 = 0;      // valid only for two-qubit kinds
    double theta = 0.0;   // valid only for rz/rzz/rx

    bool operator==(const Instruction& o) const;
};

struct Circuit {
    uint32_t n_qubits = 0;
    std::vector<Instruction> instructions;
    bool native = false;

    // Appenders validate qubit indices and the measure-is-last rule.
    void rz(uint32_t q, double theta);
    void sx(uint32_t q);
    void x(uint32_t q);
    void cz(uint32_t a, uint32_t b);
    void rzz(uint32_t a, uint32_t b, double theta);
    void rx(uint32_t q, double theta);
    void measure(uint32_t q);

    std::vector<uint32_t> measured_qubits() const;
    // Distinct cz/rzz edges as (min,max) pairs, sorted.
    std::vector<std::pair<uint32_t, uint32_t>> used_edges() const;
    size_t gate_count() const;  // instructions excluding measure

    bool operator==(const Circuit& o) const;

  private:
    void check_qubit(uint32_t q) const;
    void check_not_measured(uint32_t q) const;
    std::vector<uint8_t> measured_;  // per-qubit flag
};

struct TrotterParams {
    uint32_t n_qubits = 0;
    uint32_t steps = 0;
    double dt = 0.0;
    double coupling = 0.0;         // J
    double transverse_field = 0.0; // h
    std::vector<std::pair<uint32_t, uint32_t>> topology;

    static std::vector<std::pair<uint32_t, uint32_t>> chain(uint32_t n);
};

// One step = rzz(-2*J*dt) over every topology edge, then rx(2*h*dt) on
// every qubit; all qubits measured at the end. rx(0) layers are kept.
Circuit build_trotter_ising(const TrotterParams& params);

// Removes rz/rx instructions with angle 0 (exact). Separate opt pass,
// off by default everywhere.
Circuit prune_identity(const Circuit& c);

// Lowers rzz -> 2x cz + single-qubit frame, rx -> rz/sx template.
// Output unitary equals input up to global phase.
Circuit decompose_to_native(const Circuit& c);

std::string serialize(const Circuit& c);
Circuit parse_circuit(const std::string& text);

struct CircuitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(size_t line, const std::string& reason);
    size_t line_number;
};

}  // namespace qepzne

#include "qepzne/calib.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qepzne {

using nlohmann::json;

const EdgeCalib* CalibrationSnapshot::find_edge(uint32_t a, uint32_t b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : edges)
        if (e.q1 == a && e.q2 == b) return &e;
    return nullptr;
}

const QubitCalib::GateCalib* CalibrationSnapshot::find_gate(uint32_t q,
                                                            const std::string& kind) const {
    if (q >= qubits.size()) return nullptr;
    auto it = qubits[q].gates.find(kind);
    return it == qubits[q].gates.end() ? nullptr : &it->second;
}

double CalibrationSnapshot::flip_p01(uint32_t q) const {
    const auto& qc = qubits.at(q);
    return qc.p01.value_or(qc.readout_error);
}

double CalibrationSnapshot::flip_p10(uint32_t q) const {
    const auto& qc = qubits.at(q);
    return qc.p10.value_or(qc.readout_error);
}

const char* warning_kind_name(WarningKind k) {
    switch (k) {
        case WarningKind::POORLY_CALIBRATED_GATE: return "POORLY_CALIBRATED_GATE";
        case WarningKind::MISSING_GATE_DATA: return "MISSING_GATE_DATA";
        case WarningKind::T2_EXCEEDS_2T1: return "T2_EXCEEDS_2T1";
    }
    return "?";
}

std::string format_warning(const Warning& w) {
    std::ostringstream os;
    os << "WARN " << warning_kind_name(w.kind) << " ";
    if (w.q0 == w.q1)
        os << "q" << w.q0;
    else
        os << "q" << w.q0 << "-q" << w.q1;
    os << " " << w.detail;
    return os.str();
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& reason) {
    throw CalibError("calibration schema error at " + path + ": " + reason);
}

double require_number(const json& j, const std::string& path, const std::string& key,
                      bool positive, bool probability) {
    if (!j.contains(key)) schema_error(path + "." + key, "missing field");
    if (!j[key].is_number()) schema_error(path + "." + key, "expected a number");
    double v = j[key].get<double>();
    if (positive && !(v > 0)) schema_error(path + "." + key, "must be > 0");
    if (probability && !(v >= 0 && v < 1)) schema_error(path + "." + key, "must be in [0, 1)");
    return v;
}

}  // namespace

CalibrationSnapshot load_snapshot(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw CalibError(std::string("calibration document is not valid JSON: ") + e.what());
    }
    CalibrationSnapshot s;
    if (j.contains("label")) {
        if (!j["label"].is_string()) schema_error("label", "expected a string");
        s.label = j["label"].get<std::string>();
    }
    if (!j.contains("qubits") || !j["qubits"].is_array())
        schema_error("qubits", "missing or not an array");
    size_t qi = 0;
    for (const auto& q : j["qubits"]) {
        std::string path = "qubits[" + std::to_string(qi) + "]";
        QubitCalib qc;
        qc.t1_us = require_number(q, path, "t1_us", true, false);
        qc.t2_us = require_number(q, path, "t2_us", true, false);
        qc.readout_error = require_number(q, path, "readout_error", false, true);
        qc.readout_ns = require_number(q, path, "readout_ns", true, false);
        if (q.contains("p01")) qc.p01 = require_number(q, path, "p01", false, true);
        if (q.contains("p10")) qc.p10 = require_number(q, path, "p10", false, true);
        if (q.contains("gates")) {
            if (!q["gates"].is_object()) schema_error(path + ".gates", "expected an object");
            for (auto it = q["gates"].begin(); it != q["gates"].end(); ++it) {
                std::string gpath = path + ".gates." + it.key();
                QubitCalib::GateCalib gc;
                gc.error = require_number(it.value(), gpath, "error", false, true);
                gc.duration_ns = require_number(it.value(), gpath, "duration_ns", true, false);
                qc.gates[it.key()] = gc;
            }
        }
        s.qubits.push_back(std::move(qc));
        ++qi;
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) schema_error("edges", "expected an array");
        size_t ei = 0;
        for (const auto& e : j["edges"]) {
            std::string path = "edges[" + std::to_string(ei) + "]";
            EdgeCalib ec;
            long q1 = e.value("q1", -1L), q2 = e.value("q2", -1L);
            if (q1 < 0 || size_t(q1) >= s.qubits.size()) schema_error(path + ".q1", "bad qubit index");
            if (q2 < 0 || size_t(q2) >= s.qubits.size()) schema_error(path + ".q2", "bad qubit index");
            if (q1 == q2) schema_error(path, "q1 == q2");
            ec.q1 = std::min<uint32_t>(q1, q2);
            ec.q2 = std::max<uint32_t>(q1, q2);
            if (e.contains("cz_error"))
                ec.cz_error = require_number(e, path, "cz_error", false, true);
            ec.cz_duration_ns = require_number(e, path, "cz_duration_ns", true, false);
            s.edges.push_back(ec);
            ++ei;
        }
    }
    return s;
}

std::string save_snapshot(const CalibrationSnapshot& s) {
    json j;
    j["label"] = s.label;
    j["qubits"] = json::array();
    for (const auto& q : s.qubits) {
        json jq{{"t1_us", q.t1_us},
                {"t2_us", q.t2_us},
                {"readout_error", q.readout_error},
                {"readout_ns", q.readout_ns}};
        if (q.p01) jq["p01"] = *q.p01;
        if (q.p10) jq["p10"] = *q.p10;
        json gates = json::object();
        for (const auto& [kind, gc] : q.gates)
            gates[kind] = {{"error", gc.error}, {"duration_ns", gc.duration_ns}};
        jq["gates"] = gates;
        j["qubits"].push_back(jq);
    }
    j["edges"] = json::array();
    for (const auto& e : s.edges) {
        json je{{"q1", e.q1}, {"q2", e.q2}, {"cz_duration_ns", e.cz_duration_ns}};
        if (e.cz_error) je["cz_error"] = *e.cz_error;
        j["edges"].push_back(je);
    }
    return j.dump(2);
}

std::vector<Warning> warnings_for(const Circuit& c, const CalibrationSnapshot& s) {
    std::vector<Warning> out;
    auto used = c.used_edges();

    double sum = 0.0;
    size_t count = 0;
    for (auto [a, b] : used) {
        const EdgeCalib* e = s.find_edge(a, b);
        if (e && e->cz_error) {
            sum += *e->cz_error;
            ++count;
        }
    }
    const double mean = count ? sum / double(count) : 0.0;

    for (auto [a, b] : used) {
        const EdgeCalib* e = s.find_edge(a, b);
        if (!e || !e->cz_error) {
            out.push_back({WarningKind::MISSING_GATE_DATA, a, b,
                           "no cz error data; treated as error probability 1"});
        } else if (count > 0 && *e->cz_error > 2.0 * mean) {
            std::ostringstream d;
            d << "cz error " << *e->cz_error << " exceeds 2x circuit mean " << mean;
            out.push_back({WarningKind::POORLY_CALIBRATED_GATE, a, b, d.str()});
        }
    }

    std::set<uint32_t> used_qubits;
    for (const auto& ins : c.instructions) {
        used_qubits.insert(ins.q0);
        if (is_two_qubit(ins.kind)) used_qubits.insert(ins.q1);
    }
    for (uint32_t q : used_qubits) {
        if (q >= s.qubits.size()) continue;
        const auto& qc = s.qubits[q];
        if (qc.t2_us > 2.0 * qc.t1_us) {
            std::ostringstream d;
            d << "t2 " << qc.t2_us << "us exceeds 2*t1 " << 2.0 * qc.t1_us << "us";
            out.push_back({WarningKind::T2_EXCEEDS_2T1, q, q, d.str()});
        }
    }
    return out;
}

CalibrationSnapshot synthetic_snapshot(uint32_t n, const SyntheticProfile& p) {
    if (n < 1) throw CalibError("synthetic snapshot needs n >= 1");
    CalibrationSnapshot s;
    s.label = "synthetic-chain-" + std::to_string(n);
    for (uint32_t q = 0; q < n; ++q) {
        QubitCalib qc;
        qc.t1_us = p.t1_us;
        qc.t2_us = p.t2_us;
        qc.readout_error = p.readout_error;
        qc.readout_ns = p.readout_ns;
        for (const char* kind : {"rz", "sx", "x"})
            qc.gates[kind] = {p.sq_error, p.sq_duration_ns};
        s.qubits.push_back(std::move(qc));
    }
    for (uint32_t q = 0; q + 1 < n; ++q)
        s.edges.push_back({q, q + 1, p.cz_error, p.cz_duration_ns});
    return s;
}

}  // namespace qepzne

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ssc/corpus.hpp"
#include "ssc/matrix.hpp"
#include "ssc/model.hpp"
#include "ssc/partition.hpp"

namespace ssc {

// ---------------------------------------------------------------------------
// Deterministic JSON output. Keys are emitted in insertion order and every
// floating-point value is printed with 17 significant digits so repeated
// runs are byte-comparable. Non-finite values are emitted as the strings
// "inf", "-inf", "nan".
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class JsonOut {
public:
    JsonOut& obj() { elem(); buf_ += '{'; first_.push_back(true); return *this; }
    JsonOut& end_obj() { buf_ += '}'; first_.pop_back(); return *this; }
    JsonOut& arr() { elem(); buf_ += '['; first_.push_back(true); return *this; }
    JsonOut& end_arr() { buf_ += ']'; first_.pop_back(); return *this; }

    JsonOut& key(std::string_view k) {
        elem();
        buf_ += '"';
        escape(k);
        buf_ += "\":";
        after_key_ = true;
        return *this;
    }

    JsonOut& num(double v) { elem(); buf_ += format_double(v); return *this; }
    JsonOut& num(long v) { elem(); buf_ += std::to_string(v); return *this; }
    JsonOut& num(int v) { elem(); buf_ += std::to_string(v); return *this; }
    JsonOut& boolean(bool v) { elem(); buf_ += v ? "true" : "false"; return *this; }

    JsonOut& str(std::string_view s) {
        elem();
        buf_ += '"';
        escape(s);
        buf_ += '"';
        return *this;
    }

    JsonOut& matrix(const Matrix& m) {
        arr();
        for (int r = 0; r < m.rows(); ++r) {
            arr();
            for (int c = 0; c < m.cols(); ++c) num(m(r, c));
            end_arr();
        }
        end_arr();
        return *this;
    }

    JsonOut& vec(const std::vector<double>& v) {
        arr();
        for (double x : v) num(x);
        end_arr();
        return *this;
    }

    const std::string& text() const { return buf_; }

private:
    void elem() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) buf_ += ',';
            first_.back() = false;
        }
    }

    void escape(std::string_view s) {
        for (char c : s) {
            switch (c) {
                case '"': buf_ += "\\\""; break;
                case '\\': buf_ += "\\\\"; break;
                case '\n': buf_ += "\\n"; break;
                case '\t': buf_ += "\\t"; break;
                default: buf_ += c;
            }
        }
    }

    std::string buf_;
    std::vector<bool> first_;
    bool after_key_ = false;
};

// ---------------------------------------------------------------------------
// Input files
// ---------------------------------------------------------------------------

struct SystemBundle {
    MarkovSystem sys;
    Observable obs;
    WeightSpec weight;
};

namespace detail {

inline Matrix matrix_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ConfigError(name + " must be a non-empty array of rows");
    }
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
            throw ConfigError(name + " row " + std::to_string(r) + " has inconsistent length");
        }
        for (int c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) {
                throw ConfigError(name + " entry (" + std::to_string(r) + "," +
                                  std::to_string(c) + ") is not a number");
            }
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

inline std::vector<double> vector_from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array()) throw ConfigError(name + " must be an array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw ConfigError(name + " contains a non-number");
        v.push_back(x.get<double>());
    }
    return v;
}

}  // namespace detail

inline WeightSpec parse_weight_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("weight must be an object");
    WeightSpec w;
    const std::string kind = j.value("kind", "uniform");
    if (kind == "uniform") {
        w.kind = WeightKind::uniform;
    } else if (kind == "geometric") {
        w.kind = WeightKind::geometric;
        if (!j.contains("gamma")) throw ConfigError("geometric weight requires gamma");
        w.gamma = j["gamma"].get<double>();
    } else {
        throw ConfigError("weight kind must be 'uniform' or 'geometric'");
    }
    if (!j.contains("horizon")) throw ConfigError("weight requires a horizon");
    w.horizon = j["horizon"].get<int>();
    w.include_t0 = j.value("include_t0", false);
    weight_vector(w);  // surfaces range errors early
    return w;
}

inline SystemBundle parse_system_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("system file must be a JSON object");
    for (const char* field : {"states", "transition", "initial", "observable", "weight"}) {
        if (!j.contains(field)) throw ConfigError(std::string("system file misses '") + field + "'");
    }
    SystemBundle b;
    const int n = j["states"].get<int>();
    b.sys.transition = detail::matrix_from_json(j["transition"], "transition");
    b.sys.initial = detail::vector_from_json(j["initial"], "initial");
    if (b.sys.transition.rows() != n) {
        throw ConfigError("transition has " + std::to_string(b.sys.transition.rows()) +
                          " rows but states = " + std::to_string(n));
    }
    const auto& obs = j["observable"];
    if (!obs.is_object() || !obs.contains("space") || !obs.contains("channel")) {
        throw ConfigError("observable must be an object with 'space' and 'channel'");
    }
    b.obs.channel = detail::matrix_from_json(obs["channel"], "channel");
    if (b.obs.channel.cols() != obs["space"].get<int>()) {
        throw ConfigError("channel has " + std::to_string(b.obs.channel.cols()) +
                          " columns but observable.space = " +
                          std::to_string(obs["space"].get<int>()));
    }
    if (j.contains("cost_matrix")) {
        b.obs.cost_matrix = detail::matrix_from_json(j["cost_matrix"], "cost_matrix");
    }
    b.weight = parse_weight_json(j["weight"]);
    return b;
}

// A triple file either spells out the three matrices or names a partition
// to induce one from.
inline CompressionTriple parse_triple_json(const nlohmann::json& j, const SystemBundle& b) {
    if (!j.is_object()) throw ConfigError("triple file must be a JSON object");
    if (j.contains("partition")) {
        std::vector<int> assignment;
        for (const auto& x : j["partition"]) assignment.push_back(x.get<int>());
        if (static_cast<int>(assignment.size()) != b.sys.size()) {
            throw ConfigError("partition length does not match the system");
        }
        RefDist ref = RefDist::w_averaged_occupancy;
        RhoMode rho = RhoMode::bayes;
        if (j.contains("induce") && j["induce"].is_object()) {
            const std::string rd = j["induce"].value("ref_dist", "w_averaged_occupancy");
            if (rd == "w_averaged_occupancy") ref = RefDist::w_averaged_occupancy;
            else if (rd == "stationary") ref = RefDist::stationary;
            else if (rd == "uniform") ref = RefDist::uniform;
            else throw ConfigError("unknown ref_dist '" + rd + "'");
            const std::string rm = j["induce"].value("rho", "bayes");
            if (rm == "bayes") rho = RhoMode::bayes;
            else if (rm == "argmin-cost") rho = RhoMode::argmin_cost;
            else throw ConfigError("unknown rho mode '" + rm + "'");
        }
        return induced_triple(Partition::from_assignment(assignment), b.sys, b.obs, b.weight, ref,
                              rho);
    }
    for (const char* field : {"macrostates", "pi", "phi", "rho"}) {
        if (!j.contains(field)) throw ConfigError(std::string("triple file misses '") + field + "'");
    }
    CompressionTriple t;
    t.pi = detail::matrix_from_json(j["pi"], "pi");
    t.phi = detail::matrix_from_json(j["phi"], "phi");
    t.rho = detail::matrix_from_json(j["rho"], "rho");
    if (t.phi.rows() != j["macrostates"].get<int>()) {
        throw ConfigError("phi has " + std::to_string(t.phi.rows()) +
                          " rows but macrostates = " + std::to_string(j["macrostates"].get<int>()));
    }
    return t;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte carries the offset of the failure
        throw ConfigError("parse error in '" + path + "' at byte " + std::to_string(e.byte) +
                          ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Output files (used by `example` and by tests that round-trip corpora)
// ---------------------------------------------------------------------------

inline std::string write_system_json(const ExampleSystem& e) {
    JsonOut out;
    out.obj();
    out.key("states").num(e.sys.size());
    out.key("transition").matrix(e.sys.transition);
    out.key("initial").vec(e.sys.initial);
    out.key("observable").obj();
    out.key("space").num(e.obs.count());
    out.key("channel").matrix(e.obs.channel);
    out.end_obj();
    if (e.obs.cost_matrix) out.key("cost_matrix").matrix(*e.obs.cost_matrix);
    out.key("weight").obj();
    out.key("kind").str(e.default_weight.kind == WeightKind::uniform ? "uniform" : "geometric");
    if (e.default_weight.kind == WeightKind::geometric) out.key("gamma").num(e.default_weight.gamma);
    out.key("horizon").num(e.default_weight.horizon);
    out.key("include_t0").boolean(e.default_weight.include_t0);
    out.end_obj();
    out.end_obj();
    return out.text() + "\n";
}

inline std::string write_triple_json(const CompressionTriple& t) {
    JsonOut out;
    out.obj();
    out.key("macrostates").num(t.macro_count());
    out.key("pi").matrix(t.pi);
    out.key("phi").matrix(t.phi);
    out.key("rho").matrix(t.rho);
    out.end_obj();
    return out.text() + "\n";
}

}  // namespace ssc

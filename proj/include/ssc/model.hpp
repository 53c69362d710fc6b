#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ssc/matrix.hpp"

namespace ssc {

// Stochasticity tolerance for all row/vector distribution checks.
inline constexpr double kStochasticTol = 1e-12;
// Tolerance for totals of derived joint distributions.
inline constexpr double kJointTol = 1e-10;

// Bad configuration or incompatible inputs; the CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// NaN or infinity where a finite value is required; CLI exit 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finite microstate process: |X| states, row-stochastic one-step kernel,
// and the distribution of the initial state.
struct MarkovSystem {
    Matrix transition;            // n x n, rows P(x_{t+1} | x_t)
    std::vector<double> initial;  // length n, p0

    int size() const { return transition.rows(); }
};

// Observable space and channel, with an optional misprediction cost table.
struct Observable {
    Matrix channel;                     // n x m, rows O(omega | x)
    std::optional<Matrix> cost_matrix;  // m x m, C(omega_true, omega_pred) >= 0

    int count() const { return channel.cols(); }
};

enum class WeightKind { geometric, uniform };

// Normalized weight over future timesteps. Geometric weights follow
// w(t) proportional to (1 - gamma)^t, truncated at the horizon and
// renormalized; the truncated tail fraction is (1 - gamma)^(T + 1).
struct WeightSpec {
    WeightKind kind = WeightKind::uniform;
    double gamma = 0.5;     // geometric only, in (0, 1]
    int horizon = 1;        // T, largest included timestep
    bool include_t0 = false;

    static WeightSpec uniform(int horizon, bool include_t0 = false) {
        return WeightSpec{WeightKind::uniform, 0.0, horizon, include_t0};
    }
    static WeightSpec geometric(double gamma, int horizon, bool include_t0 = false) {
        return WeightSpec{WeightKind::geometric, gamma, horizon, include_t0};
    }
};

// The compression triple: initial compression pi, compressed dynamics phi,
// and prediction map rho.
struct CompressionTriple {
    Matrix pi;   // n x k
    Matrix phi;  // k x k
    Matrix rho;  // k x m

    int macro_count() const { return phi.rows(); }
};

enum class AccuracyKind {
    expected,
    expected_worst_case,
    avg_mi,
    mi_of_avg,
    cond_entropy,
    kl,
};

enum class CompCostKind { cardinality, sparsity, init_entropy_plus_sparsity };

struct CompCostModel {
    CompCostKind kind = CompCostKind::cardinality;
    double nnz_threshold = 1e-12;  // entries at or below this count as zero
};

// Configuration of the combined objective K = kappa*C + alpha*E.
struct ObjectiveConfig {
    AccuracyKind accuracy_kind = AccuracyKind::cond_entropy;
    CompCostModel comp_model;
    double kappa = 1.0;
    double alpha = 1.0;
    double kl_smoothing = 0.0;  // epsilon for the KL accuracy cost
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool valid() const { return errors.empty(); }
    void error(std::string msg) { errors.push_back(std::move(msg)); }
    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

namespace detail {

inline void check_stochastic_rows(const Matrix& m, const std::string& name,
                                  ValidationReport& report) {
    for (int r = 0; r < m.rows(); ++r) {
        double sum = 0.0;
        for (int c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v)) {
                report.error(name + " entry (" + std::to_string(r) + "," + std::to_string(c) +
                             ") = " + std::to_string(v) + " outside [0,1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kStochasticTol) {
            report.error(name + " row " + std::to_string(r) + " sums to " +
                         std::to_string(sum) + ", expected 1");
        }
    }
}

}  // namespace detail

// Enumerates every violated invariant of the system and observable.
// Reports, never throws; the pair is valid iff the report has no errors.
inline ValidationReport validate_system(const MarkovSystem& sys, const Observable& obs) {
    ValidationReport report;
    const int n = sys.size();
    if (n < 1) report.error("microstate count must be at least 1");
    if (sys.transition.rows() != sys.transition.cols()) {
        report.error("transition matrix is " + std::to_string(sys.transition.rows()) + "x" +
                     std::to_string(sys.transition.cols()) + ", expected square");
    }
    detail::check_stochastic_rows(sys.transition, "transition", report);

    if (static_cast<int>(sys.initial.size()) != n) {
        report.error("initial distribution has length " + std::to_string(sys.initial.size()) +
                     ", expected " + std::to_string(n));
    } else {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = sys.initial[i];
            if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v)) {
                report.error("initial entry " + std::to_string(i) + " = " + std::to_string(v) +
                             " outside [0,1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kStochasticTol) {
            report.error("initial distribution sums to " + std::to_string(sum) + ", expected 1");
        }
    }

    if (obs.channel.rows() != n) {
        report.error("observable channel has " + std::to_string(obs.channel.rows()) +
                     " rows, expected " + std::to_string(n));
    }
    detail::check_stochastic_rows(obs.channel, "channel", report);

    if (obs.cost_matrix) {
        const Matrix& c = *obs.cost_matrix;
        const int m = obs.count();
        if (c.rows() != m || c.cols() != m) {
            report.error("cost matrix is " + std::to_string(c.rows()) + "x" +
                         std::to_string(c.cols()) + ", expected " + std::to_string(m) + "x" +
                         std::to_string(m));
        } else {
            for (int i = 0; i < m; ++i) {
                double row_min = c(i, 0);
                for (int j = 0; j < m; ++j) {
                    if (!(c(i, j) >= 0.0) || !std::isfinite(c(i, j))) {
                        report.error("cost matrix entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") must be finite and nonnegative");
                    }
                    row_min = std::min(row_min, c(i, j));
                }
                if (c(i, i) > row_min) {
                    report.warn("cost matrix diagonal C(" + std::to_string(i) + "," +
                                std::to_string(i) + ") exceeds its row minimum");
                }
            }
        }
    }
    return report;
}

// Dimension compatibility and stochasticity of a triple against its system.
inline ValidationReport validate_triple(const CompressionTriple& triple, const MarkovSystem& sys,
                                        const Observable& obs) {
    ValidationReport report;
    const int n = sys.size();
    const int m = obs.count();
    const int k = triple.macro_count();
    if (k < 1) report.error("macrostate count must be at least 1");
    if (triple.pi.rows() != n || triple.pi.cols() != k) {
        report.error("pi is " + std::to_string(triple.pi.rows()) + "x" +
                     std::to_string(triple.pi.cols()) + ", expected " + std::to_string(n) + "x" +
                     std::to_string(k));
    }
    if (triple.phi.rows() != k || triple.phi.cols() != k) {
        report.error("phi is " + std::to_string(triple.phi.rows()) + "x" +
                     std::to_string(triple.phi.cols()) + ", expected " + std::to_string(k) + "x" +
                     std::to_string(k));
    }
    if (triple.rho.rows() != k || triple.rho.cols() != m) {
        report.error("rho is " + std::to_string(triple.rho.rows()) + "x" +
                     std::to_string(triple.rho.cols()) + ", expected " + std::to_string(k) + "x" +
                     std::to_string(m));
    }
    detail::check_stochastic_rows(triple.pi, "pi", report);
    detail::check_stochastic_rows(triple.phi, "phi", report);
    detail::check_stochastic_rows(triple.rho, "rho", report);
    return report;
}

// Materialized weight terms (t, w(t)), normalized over the included range.
inline std::vector<std::pair<int, double>> weight_vector(const WeightSpec& spec) {
    if (spec.horizon < 0) throw ConfigError("weight horizon must be nonnegative");
    const int t_min = spec.include_t0 ? 0 : 1;
    if (spec.horizon < t_min) {
        throw ConfigError("weight support is empty: horizon " + std::to_string(spec.horizon) +
                          " with include_t0=" + (spec.include_t0 ? "true" : "false"));
    }
    std::vector<std::pair<int, double>> terms;
    terms.reserve(spec.horizon - t_min + 1);
    double total = 0.0;
    for (int t = t_min; t <= spec.horizon; ++t) {
        double w = 1.0;
        if (spec.kind == WeightKind::geometric) {
            if (!(spec.gamma > 0.0 && spec.gamma <= 1.0)) {
                throw ConfigError("geometric discount gamma must lie in (0,1]");
            }
            w = std::pow(1.0 - spec.gamma, t);  // 0^0 == 1 covers gamma = 1
        }
        terms.emplace_back(t, w);
        total += w;
    }
    if (total <= 0.0) throw ConfigError("weight function has zero total mass over its support");
    for (auto& [t, w] : terms) w /= total;
    return terms;
}

// The null compression: Y = X, pi = id, phi = P, rho = O.
inline CompressionTriple identity_triple(const MarkovSystem& sys, const Observable& obs) {
    return CompressionTriple{Matrix::identity(sys.size()), sys.transition, obs.channel};
}

inline const char* accuracy_kind_name(AccuracyKind kind) {
    switch (kind) {
        case AccuracyKind::expected: return "expected";
        case AccuracyKind::expected_worst_case: return "expected-worst";
        case AccuracyKind::avg_mi: return "avg-mi";
        case AccuracyKind::mi_of_avg: return "mi-of-avg";
        case AccuracyKind::cond_entropy: return "cond-ent";
        case AccuracyKind::kl: return "kl";
    }
    return "?";
}

inline const char* comp_cost_kind_name(CompCostKind kind) {
    switch (kind) {
        case CompCostKind::cardinality: return "cardinality";
        case CompCostKind::sparsity: return "sparsity";
        case CompCostKind::init_entropy_plus_sparsity: return "init-entropy";
    }
    return "?";
}

}  // namespace ssc

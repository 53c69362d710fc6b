#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "ssc/info.hpp"
#include "ssc/model.hpp"
#include "ssc/rng.hpp"

namespace ssc {

enum class EstimatorKind { plugin, plugin_miller_madow };

struct SampleConfig {
    long n_paths = 100000;
    int horizon = 1;
    std::uint64_t seed = 0;
    EstimatorKind estimator = EstimatorKind::plugin;
};

// Sampled trajectories of the coupled pipelines: the true chain with its
// observations and the compressed chain with its predictions. Each path is
// drawn from its own deterministic sub-stream of the seed, so estimates do
// not depend on how paths are partitioned across workers.
struct PathSet {
    SampleConfig cfg;
    int n_states = 0;
    int n_symbols = 0;  // observable alphabet size
    std::vector<int> x0;
    std::vector<std::vector<int>> omega;       // [path][t], t = 0..horizon
    std::vector<std::vector<int>> omega_pred;  // [path][t]
};

inline PathSet sample_paths(const MarkovSystem& sys, const Observable& obs,
                            const CompressionTriple& triple, const SampleConfig& cfg) {
    if (cfg.n_paths < 1) throw ConfigError("n_paths must be at least 1");
    if (cfg.horizon < 1) throw ConfigError("sampling horizon must be at least 1");
    PathSet paths;
    paths.cfg = cfg;
    paths.n_states = sys.size();
    paths.n_symbols = obs.count();
    paths.x0.resize(cfg.n_paths);
    paths.omega.assign(cfg.n_paths, std::vector<int>(cfg.horizon + 1));
    paths.omega_pred.assign(cfg.n_paths, std::vector<int>(cfg.horizon + 1));

    for (long i = 0; i < cfg.n_paths; ++i) {
        SplitMix64 rng = SplitMix64::stream(cfg.seed, static_cast<std::uint64_t>(i));
        int x = rng.sample(sys.initial);
        paths.x0[i] = x;
        paths.omega[i][0] = rng.sample(obs.channel.row(x));
        int y = rng.sample(triple.pi.row(x));
        paths.omega_pred[i][0] = rng.sample(triple.rho.row(y));
        for (int t = 1; t <= cfg.horizon; ++t) {
            x = rng.sample(sys.transition.row(x));
            paths.omega[i][t] = rng.sample(obs.channel.row(x));
            y = rng.sample(triple.phi.row(y));
            paths.omega_pred[i][t] = rng.sample(triple.rho.row(y));
        }
    }
    return paths;
}

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    bool infinite = false;
};

namespace detail {

// Plug-in entropy of a count table, optionally Miller-Madow corrected:
// H_MM = H_plugin + (occupied_cells - 1) / (2 N ln 2).
inline double entropy_from_counts(const std::vector<double>& counts, double total,
                                  EstimatorKind estimator) {
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    long occupied = 0;
    for (double c : counts) {
        if (c <= 0.0) continue;
        ++occupied;
        h -= (c / total) * std::log2(c / total);
    }
    if (estimator == EstimatorKind::plugin_miller_madow) {
        h += static_cast<double>(occupied - 1) / (2.0 * total * std::numbers::ln2);
    }
    return h;
}

struct JointCounts {
    std::vector<double> cells;  // m x m, row = predicted, col = true
    std::vector<double> pred;
    std::vector<double> truth;
    double total = 0.0;
    int m = 0;

    explicit JointCounts(int m_) : cells(static_cast<std::size_t>(m_) * m_, 0.0),
                                   pred(m_, 0.0), truth(m_, 0.0), m(m_) {}

    void add(int w_pred, int w_true, double weight) {
        cells[static_cast<std::size_t>(w_pred) * m + w_true] += weight;
        pred[w_pred] += weight;
        truth[w_true] += weight;
        total += weight;
    }

    double mi(EstimatorKind est) const {
        const double h = entropy_from_counts(pred, total, est) +
                         entropy_from_counts(truth, total, est) -
                         entropy_from_counts(cells, total, est);
        return h < 0.0 && est == EstimatorKind::plugin && h > -1e-12 ? 0.0 : h;
    }

    double cond_entropy_true_given_pred(EstimatorKind est) const {
        return entropy_from_counts(cells, total, est) - entropy_from_counts(pred, total, est);
    }
};

// Core estimator over a weighted multiset of paths; bootstrap resamples
// reuse it with resampled weights.
inline double estimate_value(const PathSet& paths, AccuracyKind kind,
                             const std::vector<std::pair<int, double>>& w,
                             const std::optional<Matrix>& cost_matrix,
                             const std::vector<double>& path_weight, EstimatorKind estimator) {
    const int m = paths.n_symbols;
    double total_weight = 0.0;
    for (double pw : path_weight) total_weight += pw;

    switch (kind) {
        case AccuracyKind::expected: {
            if (!cost_matrix) throw ConfigError("expected accuracy cost requires a cost matrix");
            double acc = 0.0;
            for (std::size_t i = 0; i < paths.x0.size(); ++i) {
                if (path_weight[i] == 0.0) continue;
                double c = 0.0;
                for (const auto& [t, wt] : w)
                    c += wt * (*cost_matrix)(paths.omega[i][t], paths.omega_pred[i][t]);
                acc += path_weight[i] * c;
            }
            return acc / total_weight;
        }
        case AccuracyKind::expected_worst_case: {
            if (!cost_matrix) throw ConfigError("expected accuracy cost requires a cost matrix");
            double result = 0.0;
            std::vector<double> cost_by_x0(paths.n_states);
            std::vector<double> weight_by_x0(paths.n_states);
            for (const auto& [t, wt] : w) {
                std::fill(cost_by_x0.begin(), cost_by_x0.end(), 0.0);
                std::fill(weight_by_x0.begin(), weight_by_x0.end(), 0.0);
                for (std::size_t i = 0; i < paths.x0.size(); ++i) {
                    if (path_weight[i] == 0.0) continue;
                    cost_by_x0[paths.x0[i]] +=
                        path_weight[i] * (*cost_matrix)(paths.omega[i][t], paths.omega_pred[i][t]);
                    weight_by_x0[paths.x0[i]] += path_weight[i];
                }
                double worst = 0.0;
                for (int x = 0; x < paths.n_states; ++x)
                    if (weight_by_x0[x] > 0.0) worst = std::max(worst, cost_by_x0[x] / weight_by_x0[x]);
                result += wt * worst;
            }
            return result;
        }
        case AccuracyKind::avg_mi: {
            double acc = 0.0;
            for (const auto& [t, wt] : w) {
                JointCounts joint(m);
                for (std::size_t i = 0; i < paths.x0.size(); ++i)
                    if (path_weight[i] != 0.0)
                        joint.add(paths.omega_pred[i][t], paths.omega[i][t], path_weight[i]);
                acc -= wt * joint.mi(estimator);
            }
            return acc;
        }
        case AccuracyKind::mi_of_avg:
        case AccuracyKind::cond_entropy: {
            JointCounts joint(m);
            for (const auto& [t, wt] : w)
                for (std::size_t i = 0; i < paths.x0.size(); ++i)
                    if (path_weight[i] != 0.0)
                        joint.add(paths.omega_pred[i][t], paths.omega[i][t], wt * path_weight[i]);
            return kind == AccuracyKind::mi_of_avg
                       ? -joint.mi(estimator)
                       : joint.cond_entropy_true_given_pred(estimator);
        }
        case AccuracyKind::kl: {
            // Plug-in conditional distributions per initial state; the
            // Miller-Madow correction does not apply to a divergence.
            const int n = paths.n_states;
            double acc = 0.0;
            std::vector<double> pred_counts(static_cast<std::size_t>(n) * m);
            std::vector<double> true_counts(static_cast<std::size_t>(n) * m);
            std::vector<double> by_x0(n);
            for (const auto& [t, wt] : w) {
                std::fill(pred_counts.begin(), pred_counts.end(), 0.0);
                std::fill(true_counts.begin(), true_counts.end(), 0.0);
                std::fill(by_x0.begin(), by_x0.end(), 0.0);
                for (std::size_t i = 0; i < paths.x0.size(); ++i) {
                    if (path_weight[i] == 0.0) continue;
                    const int x = paths.x0[i];
                    by_x0[x] += path_weight[i];
                    pred_counts[static_cast<std::size_t>(x) * m + paths.omega_pred[i][t]] +=
                        path_weight[i];
                    true_counts[static_cast<std::size_t>(x) * m + paths.omega[i][t]] +=
                        path_weight[i];
                }
                for (int x = 0; x < n; ++x) {
                    if (by_x0[x] == 0.0) continue;
                    double kl = 0.0;
                    for (int o = 0; o < m; ++o) {
                        const double p = pred_counts[static_cast<std::size_t>(x) * m + o];
                        if (p <= 0.0) continue;
                        const double q = true_counts[static_cast<std::size_t>(x) * m + o];
                        if (q <= 0.0) return std::numeric_limits<double>::infinity();
                        kl += (p / by_x0[x]) * std::log2(p / q);
                    }
                    acc += wt * (by_x0[x] / total_weight) * kl;
                }
            }
            return acc;
        }
    }
    throw ConfigError("unknown accuracy kind");
}

}  // namespace detail

// Plug-in estimate of an accuracy cost from sampled paths, with a standard
// error: closed-form for the expected cost (sample stdev / sqrt(N)), and a
// 32-resample bootstrap seeded from the path seed for everything else.
inline Estimate estimate_cost(const PathSet& paths, AccuracyKind kind, const WeightSpec& w,
                              const std::optional<Matrix>& cost_matrix = std::nullopt) {
    const auto terms = weight_vector(w);
    if (terms.back().first > paths.cfg.horizon) {
        throw ConfigError("weight support exceeds the sampled horizon");
    }
    const long n = static_cast<long>(paths.x0.size());
    const std::vector<double> unit(n, 1.0);
    Estimate est;
    est.value = detail::estimate_value(paths, kind, terms, cost_matrix, unit,
                                       paths.cfg.estimator);
    if (std::isinf(est.value)) {
        est.infinite = true;
        return est;
    }

    if (kind == AccuracyKind::expected) {
        double mean = 0.0, m2 = 0.0;
        long count = 0;
        for (long i = 0; i < n; ++i) {
            double c = 0.0;
            for (const auto& [t, wt] : terms)
                c += wt * (*cost_matrix)(paths.omega[i][t], paths.omega_pred[i][t]);
            ++count;
            const double d = c - mean;
            mean += d / count;
            m2 += d * (c - mean);
        }
        est.std_error = n > 1 ? std::sqrt(m2 / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
        return est;
    }

    constexpr int kResamples = 32;
    std::vector<double> weights(n);
    std::vector<double> values;
    values.reserve(kResamples);
    for (int b = 0; b < kResamples; ++b) {
        SplitMix64 rng = SplitMix64::stream(paths.cfg.seed, 0xB00757ull * (b + 1));
        std::fill(weights.begin(), weights.end(), 0.0);
        for (long i = 0; i < n; ++i)
            weights[rng.next_below(static_cast<std::uint64_t>(n))] += 1.0;
        const double v = detail::estimate_value(paths, kind, terms, cost_matrix, weights,
                                                paths.cfg.estimator);
        if (!std::isinf(v)) values.push_back(v);
    }
    if (values.size() > 1) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        est.std_error = std::sqrt(var / (values.size() - 1));
    }
    return est;
}

// Acceptance predicate shared with the CLI's mc-check: the estimate must be
// within max(3 sigma, 0.02) of the exact value, with two infinities of the
// same sign counting as agreement.
inline bool mc_consistent(double exact, const Estimate& est, double abs_floor = 0.02,
                          double sigmas = 3.0) {
    if (std::isinf(exact) || est.infinite) {
        return std::isinf(exact) && est.infinite;
    }
    return std::abs(est.value - exact) <= std::max(sigmas * est.std_error, abs_floor);
}

}  // namespace ssc

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ssc/info.hpp"
#include "ssc/model.hpp"
#include "ssc/propagation.hpp"

namespace ssc {

enum class Aggregate { mean, worst_case };

// Binds a system, observable, and weight function so that the true-side
// pipelines q_t are computed once and reused across many candidate triples.
struct AccuracyContext {
    const MarkovSystem* sys = nullptr;
    const Observable* obs = nullptr;
    std::vector<std::pair<int, double>> weights;
    int max_t = 0;
    TrueChainCache qs;
};

inline AccuracyContext make_accuracy_context(const MarkovSystem& sys, const Observable& obs,
                                             const WeightSpec& w) {
    AccuracyContext ctx;
    ctx.sys = &sys;
    ctx.obs = &obs;
    ctx.weights = weight_vector(w);
    ctx.max_t = ctx.weights.back().first;
    ctx.qs = TrueChainCache(sys, obs, ctx.max_t);
    return ctx;
}

namespace detail {

// sum_{omega, omega'} q_t(omega | x0) r_t(omega' | x0) C(omega, omega').
inline double expected_pair_cost(const Matrix& q, const Matrix& r, const Matrix& cost, int x0) {
    double total = 0.0;
    for (int w_true = 0; w_true < q.cols(); ++w_true) {
        const double qv = q(x0, w_true);
        if (qv == 0.0) continue;
        double inner = 0.0;
        for (int w_pred = 0; w_pred < r.cols(); ++w_pred)
            inner += r(x0, w_pred) * cost(w_true, w_pred);
        total += qv * inner;
    }
    return total;
}

inline double expected_from(const AccuracyContext& ctx, const TripleCache& rs, Aggregate agg) {
    if (!ctx.obs->cost_matrix) {
        throw ConfigError("expected accuracy cost requires a cost matrix");
    }
    const Matrix& cost = *ctx.obs->cost_matrix;
    const int n = ctx.sys->size();
    double total = 0.0;
    for (const auto& [t, wt] : ctx.weights) {
        const Matrix& q = ctx.qs.q(t);
        const Matrix& r = rs.r(t);
        double at_t = 0.0;
        if (agg == Aggregate::mean) {
            for (int x0 = 0; x0 < n; ++x0) {
                if (ctx.sys->initial[x0] == 0.0) continue;
                at_t += ctx.sys->initial[x0] * expected_pair_cost(q, r, cost, x0);
            }
        } else {
            // Worst case ranges over every initial state, inside the t-sum.
            at_t = -std::numeric_limits<double>::infinity();
            for (int x0 = 0; x0 < n; ++x0)
                at_t = std::max(at_t, expected_pair_cost(q, r, cost, x0));
        }
        total += wt * at_t;
    }
    return total;
}

inline double kl_from(const AccuracyContext& ctx, const TripleCache& rs, double eps) {
    const int n = ctx.sys->size();
    double total = 0.0;
    for (const auto& [t, wt] : ctx.weights) {
        const Matrix& q = ctx.qs.q(t);
        const Matrix& r = rs.r(t);
        for (int x0 = 0; x0 < n; ++x0) {
            const double p0 = ctx.sys->initial[x0];
            if (p0 == 0.0) continue;
            const double kl = kl_divergence_bits(r.row(x0), q.row(x0), eps);
            if (std::isinf(kl)) return std::numeric_limits<double>::infinity();
            total += wt * p0 * kl;
        }
    }
    return total;
}

inline Matrix averaged_joint_from(const AccuracyContext& ctx, const TripleCache& rs) {
    Matrix avg(rs.r(0).cols(), ctx.obs->count());
    for (const auto& [t, wt] : ctx.weights) {
        const Matrix jt = couple_through_x0(ctx.sys->initial, rs.r(t), ctx.qs.q(t));
        for (int a = 0; a < avg.rows(); ++a)
            for (int b = 0; b < avg.cols(); ++b) avg(a, b) += wt * jt(a, b);
    }
    return avg;
}

inline double accuracy_from_context(const AccuracyContext& ctx, const TripleCache& rs,
                                    AccuracyKind kind, double kl_eps) {
    switch (kind) {
        case AccuracyKind::expected:
            return expected_from(ctx, rs, Aggregate::mean);
        case AccuracyKind::expected_worst_case:
            return expected_from(ctx, rs, Aggregate::worst_case);
        case AccuracyKind::avg_mi: {
            double total = 0.0;
            for (const auto& [t, wt] : ctx.weights) {
                const Matrix jt = couple_through_x0(ctx.sys->initial, rs.r(t), ctx.qs.q(t));
                total -= wt * mutual_information_bits(jt);
            }
            return total;
        }
        case AccuracyKind::mi_of_avg:
            return -mutual_information_bits(averaged_joint_from(ctx, rs));
        case AccuracyKind::cond_entropy:
            return conditional_entropy_true_given_pred(averaged_joint_from(ctx, rs));
        case AccuracyKind::kl:
            return kl_from(ctx, rs, kl_eps);
    }
    throw ConfigError("unknown accuracy kind");
}

}  // namespace detail

// Time-weighted expected misprediction cost (the exogenous accuracy cost).
// The mean aggregate averages over x0 under p0; worst_case takes the max
// over initial states inside the time sum.
inline double expected_cost(const MarkovSystem& sys, const Observable& obs,
                            const CompressionTriple& triple, const WeightSpec& w,
                            Aggregate aggregate = Aggregate::mean) {
    const AccuracyContext ctx = make_accuracy_context(sys, obs, w);
    const TripleCache rs(triple, ctx.max_t);
    return detail::expected_from(ctx, rs, aggregate);
}

// I(predicted ; true) at a single timestep, in bits; the accuracy cost at
// that timestep is its negation.
inline double mi_per_time(const MarkovSystem& sys, const Observable& obs,
                          const CompressionTriple& triple, int t) {
    return mutual_information_bits(joint_at_time(sys, obs, triple, t).p);
}

// Macro-level counterpart, I(Y_t ; true); an upper bound on mi_per_time by
// data processing since the prediction is drawn from y_t alone.
inline double mi_per_time_macro(const MarkovSystem& sys, const Observable& obs,
                                const CompressionTriple& triple, int t) {
    return mutual_information_bits(joint_at_time_macro(sys, obs, triple, t).p);
}

// Negated W-average of the per-time mutual informations.
inline double avg_mi_cost(const MarkovSystem& sys, const Observable& obs,
                          const CompressionTriple& triple, const WeightSpec& w) {
    const AccuracyContext ctx = make_accuracy_context(sys, obs, w);
    const TripleCache rs(triple, ctx.max_t);
    return detail::accuracy_from_context(ctx, rs, AccuracyKind::avg_mi, 0.0);
}

// Negated mutual information of the time-averaged joint. The average
// enforces a single time-invariant decoding, so it can be far from the
// average of the per-time values.
inline double mi_of_avg_cost(const MarkovSystem& sys, const Observable& obs,
                             const CompressionTriple& triple, const WeightSpec& w) {
    const AccuracyContext ctx = make_accuracy_context(sys, obs, w);
    const TripleCache rs(triple, ctx.max_t);
    return detail::accuracy_from_context(ctx, rs, AccuracyKind::mi_of_avg, 0.0);
}

// H(true | predicted) under the time-averaged joint: the expected number of
// extra bits needed to recover the truth from the prediction.
inline double cond_entropy_cost(const MarkovSystem& sys, const Observable& obs,
                                const CompressionTriple& triple, const WeightSpec& w) {
    const AccuracyContext ctx = make_accuracy_context(sys, obs, w);
    const TripleCache rs(triple, ctx.max_t);
    return detail::accuracy_from_context(ctx, rs, AccuracyKind::cond_entropy, 0.0);
}

// W-averaged, p0-averaged KL[predicted-distribution || true-distribution]
// per initial state. Missing support yields +inf when smoothing == 0; that
// is a valid (flagged) return, not an error.
inline double kl_cost(const MarkovSystem& sys, const Observable& obs,
                      const CompressionTriple& triple, const WeightSpec& w,
                      double smoothing = 0.0) {
    if (smoothing < 0.0) throw ConfigError("KL smoothing must be nonnegative");
    const AccuracyContext ctx = make_accuracy_context(sys, obs, w);
    const TripleCache rs(triple, ctx.max_t);
    return detail::accuracy_from_context(ctx, rs, AccuracyKind::kl, smoothing);
}

inline double accuracy_cost(AccuracyKind kind, const MarkovSystem& sys, const Observable& obs,
                            const CompressionTriple& triple, const WeightSpec& w,
                            double kl_smoothing = 0.0) {
    const AccuracyContext ctx = make_accuracy_context(sys, obs, w);
    const TripleCache rs(triple, ctx.max_t);
    return detail::accuracy_from_context(ctx, rs, kind, kl_smoothing);
}

// Per-timestep diagnostic values (unweighted) for reporting: the expected
// cost, per-time MI, per-time conditional entropy, or per-time KL term at
// each t in the weight support.
inline std::vector<std::pair<int, double>> per_time_accuracy(AccuracyKind kind,
                                                             const MarkovSystem& sys,
                                                             const Observable& obs,
                                                             const CompressionTriple& triple,
                                                             const WeightSpec& w,
                                                             double kl_smoothing = 0.0) {
    if ((kind == AccuracyKind::expected || kind == AccuracyKind::expected_worst_case) &&
        !obs.cost_matrix) {
        throw ConfigError("expected accuracy cost requires a cost matrix");
    }
    const AccuracyContext ctx = make_accuracy_context(sys, obs, w);
    const TripleCache rs(triple, ctx.max_t);
    std::vector<std::pair<int, double>> out;
    out.reserve(ctx.weights.size());
    for (const auto& [t, wt] : ctx.weights) {
        double v = 0.0;
        switch (kind) {
            case AccuracyKind::expected: {
                double at_t = 0.0;
                for (int x0 = 0; x0 < sys.size(); ++x0) {
                    if (sys.initial[x0] == 0.0) continue;
                    at_t += sys.initial[x0] *
                            detail::expected_pair_cost(ctx.qs.q(t), rs.r(t), *obs.cost_matrix, x0);
                }
                v = at_t;
                break;
            }
            case AccuracyKind::expected_worst_case: {
                double at_t = -std::numeric_limits<double>::infinity();
                for (int x0 = 0; x0 < sys.size(); ++x0)
                    at_t = std::max(at_t, detail::expected_pair_cost(ctx.qs.q(t), rs.r(t),
                                                                     *obs.cost_matrix, x0));
                v = at_t;
                break;
            }
            case AccuracyKind::avg_mi:
            case AccuracyKind::mi_of_avg:
                v = mutual_information_bits(
                    detail::couple_through_x0(sys.initial, rs.r(t), ctx.qs.q(t)));
                break;
            case AccuracyKind::cond_entropy:
                v = conditional_entropy_true_given_pred(
                    detail::couple_through_x0(sys.initial, rs.r(t), ctx.qs.q(t)));
                break;
            case AccuracyKind::kl: {
                double at_t = 0.0;
                for (int x0 = 0; x0 < sys.size(); ++x0) {
                    if (sys.initial[x0] == 0.0) continue;
                    at_t += sys.initial[x0] *
                            kl_divergence_bits(rs.r(t).row(x0), ctx.qs.q(t).row(x0), kl_smoothing);
                }
                v = at_t;
                break;
            }
        }
        out.emplace_back(t, v);
    }
    return out;
}

}  // namespace ssc

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ssc/matrix.hpp"
#include "ssc/model.hpp"

namespace ssc {

// Joint distribution over (predicted symbol, true symbol). Row index is the
// prediction, column index the truth. `averaged` marks the time-averaged
// joint; otherwise `t` labels the timestep. `renormalized` is set only when
// the total drifted beyond tolerance and had to be rescaled; silent
// renormalization is not done.
struct JointDist {
    Matrix p;
    int t = -1;
    bool averaged = false;
    bool renormalized = false;
};

namespace detail {

inline JointDist finalize_joint(Matrix m, int t, bool averaged) {
    JointDist j{std::move(m), t, averaged, false};
    const double total = j.p.sum();
    if (std::abs(total - 1.0) > kJointTol && total > 0.0) {
        for (int r = 0; r < j.p.rows(); ++r)
            for (int c = 0; c < j.p.cols(); ++c) j.p(r, c) /= total;
        j.renormalized = true;
    }
    return j;
}

// Joint(pred, true) = sum_x0 p0(x0) pred_rows(x0, .) (x) true_rows(x0, .).
inline Matrix couple_through_x0(const std::vector<double>& p0, const Matrix& pred_rows,
                                const Matrix& true_rows) {
    Matrix joint(pred_rows.cols(), true_rows.cols());
    for (int x0 = 0; x0 < pred_rows.rows(); ++x0) {
        const double w = p0[x0];
        if (w == 0.0) continue;
        for (int a = 0; a < pred_rows.cols(); ++a) {
            const double pa = w * pred_rows(x0, a);
            if (pa == 0.0) continue;
            for (int b = 0; b < true_rows.cols(); ++b) joint(a, b) += pa * true_rows(x0, b);
        }
    }
    return joint;
}

}  // namespace detail

// Rows P(omega_t | x0): t-step propagation of the chain followed by the
// observable channel. q_0 is the channel itself.
inline Matrix true_observable_dist(const MarkovSystem& sys, const Observable& obs, int t) {
    Matrix q = obs.channel;
    for (int step = 0; step < t; ++step) q = matmul(sys.transition, q);
    return q;
}

// Rows P(macrostate y_t | x0) = pi * phi^t.
inline Matrix predicted_macro_dist(const CompressionTriple& triple, int t) {
    Matrix s = triple.pi;
    for (int step = 0; step < t; ++step) s = matmul(s, triple.phi);
    return s;
}

// Rows P(omega'_t | x0) = pi * phi^t * rho.
inline Matrix predicted_observable_dist(const CompressionTriple& triple, int t) {
    return matmul(predicted_macro_dist(triple, t), triple.rho);
}

// The two pipelines share only the initial state, so the joint couples
// P(omega'_t | x0) and P(omega_t | x0) through p0.
inline JointDist joint_at_time(const MarkovSystem& sys, const Observable& obs,
                               const CompressionTriple& triple, int t) {
    const Matrix r = predicted_observable_dist(triple, t);
    const Matrix q = true_observable_dist(sys, obs, t);
    return detail::finalize_joint(detail::couple_through_x0(sys.initial, r, q), t, false);
}

// Macro-level variant: joint over (y_t, omega_t), i.e. rho replaced by the
// identity relabeling of the macro alphabet.
inline JointDist joint_at_time_macro(const MarkovSystem& sys, const Observable& obs,
                                     const CompressionTriple& triple, int t) {
    const Matrix s = predicted_macro_dist(triple, t);
    const Matrix q = true_observable_dist(sys, obs, t);
    return detail::finalize_joint(detail::couple_through_x0(sys.initial, s, q), t, false);
}

// Joint over (omega'_{t-lag}, omega_t); lag = 0 reduces to joint_at_time.
inline JointDist lagged_joint(const MarkovSystem& sys, const Observable& obs,
                              const CompressionTriple& triple, int t, int lag = 1) {
    if (lag < 0 || t < lag) {
        throw ConfigError("lagged_joint requires t >= lag >= 0, got t=" + std::to_string(t) +
                          " lag=" + std::to_string(lag));
    }
    const Matrix r = predicted_observable_dist(triple, t - lag);
    const Matrix q = true_observable_dist(sys, obs, t);
    return detail::finalize_joint(detail::couple_through_x0(sys.initial, r, q), t, false);
}

// Precomputed q_t and r_t for t = 0..max_t. Built once per evaluation; the
// true-side rows are triple-independent, so optimizers can keep one
// TrueChainCache and swap triples.
class TrueChainCache {
public:
    TrueChainCache() = default;

    TrueChainCache(const MarkovSystem& sys, const Observable& obs, int max_t) {
        q_.reserve(max_t + 1);
        q_.push_back(obs.channel);
        for (int t = 1; t <= max_t; ++t) q_.push_back(matmul(sys.transition, q_.back()));
    }

    int max_t() const { return static_cast<int>(q_.size()) - 1; }
    const Matrix& q(int t) const { return q_[t]; }

private:
    std::vector<Matrix> q_;
};

class TripleCache {
public:
    TripleCache() = default;

    TripleCache(const CompressionTriple& triple, int max_t) {
        Matrix s = triple.pi;
        r_.reserve(max_t + 1);
        r_.push_back(matmul(s, triple.rho));
        for (int t = 1; t <= max_t; ++t) {
            s = matmul(s, triple.phi);
            r_.push_back(matmul(s, triple.rho));
        }
    }

    const Matrix& r(int t) const { return r_[t]; }

private:
    std::vector<Matrix> r_;
};

inline JointDist joint_from_caches(const MarkovSystem& sys, const TrueChainCache& qs,
                                   const TripleCache& rs, int t) {
    return detail::finalize_joint(detail::couple_through_x0(sys.initial, rs.r(t), qs.q(t)), t,
                                  false);
}

// W-weighted mixture of the per-time joints. The generalized overload takes
// already-materialized (t, weight) terms.
inline JointDist time_averaged_joint(const MarkovSystem& sys, const Observable& obs,
                                     const CompressionTriple& triple,
                                     const std::vector<std::pair<int, double>>& terms) {
    if (terms.empty()) throw ConfigError("time-averaged joint needs at least one weight term");
    int max_t = 0;
    for (const auto& [t, wt] : terms) max_t = std::max(max_t, t);
    const TrueChainCache qs(sys, obs, max_t);
    const TripleCache rs(triple, max_t);
    Matrix avg(triple.rho.cols(), obs.count());
    for (const auto& [t, wt] : terms) {
        const Matrix jt = detail::couple_through_x0(sys.initial, rs.r(t), qs.q(t));
        for (int a = 0; a < avg.rows(); ++a)
            for (int b = 0; b < avg.cols(); ++b) avg(a, b) += wt * jt(a, b);
    }
    return detail::finalize_joint(std::move(avg), -1, true);
}

inline JointDist time_averaged_joint(const MarkovSystem& sys, const Observable& obs,
                                     const CompressionTriple& triple, const WeightSpec& w) {
    return time_averaged_joint(sys, obs, triple, weight_vector(w));
}

}  // namespace ssc

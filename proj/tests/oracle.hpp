#pragma once

// Brute-force oracles for the accuracy costs, independent of the library's
// propagation path. Everything here enumerates complete micro and macro
// trajectories and sums products of transition entries explicitly; entropies
// and divergences are recomputed locally from those tables.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ssc/matrix.hpp"
#include "ssc/model.hpp"

namespace oracle {

struct Tables {
    int n = 0, k = 0, m = 0, horizon = 0;
    // per t: P(omega_t | x0) and P(omega'_t | x0), plus the joint over
    // (omega'_t, omega_t) and the per-x0 expected pair cost.
    std::vector<ssc::Matrix> q, r, joint;
    std::vector<std::vector<double>> pair_cost;  // [t][x0], empty without C
};

// Enumerates every micro path (x0..xT) and, per initial state, every macro
// path (y0..yT).
inline Tables enumerate_paths(const ssc::MarkovSystem& sys, const ssc::Observable& obs,
                              const ssc::CompressionTriple& triple, int horizon) {
    Tables tb;
    tb.n = sys.size();
    tb.k = triple.macro_count();
    tb.m = obs.count();
    tb.horizon = horizon;
    const int steps = horizon + 1;

    tb.q.assign(steps, ssc::Matrix(tb.n, tb.m));
    tb.r.assign(steps, ssc::Matrix(tb.n, tb.m));

    // Micro paths: accumulate P(omega_t | x0) path by path.
    {
        std::vector<int> path(steps, 0);
        const auto walk = [&](auto&& self, int depth, double prob) -> void {
            if (prob == 0.0) return;
            if (depth == steps) {
                for (int t = 0; t < steps; ++t)
                    for (int w = 0; w < tb.m; ++w)
                        tb.q[t](path[0], w) += prob * obs.channel(path[t], w);
                return;
            }
            for (int x = 0; x < tb.n; ++x) {
                path[depth] = x;
                self(self, depth + 1, prob * sys.transition(path[depth - 1], x));
            }
        };
        for (int x0 = 0; x0 < tb.n; ++x0) {
            path[0] = x0;
            walk(walk, 1, 1.0);
        }
    }

    // Macro paths, conditioned on each initial microstate through pi.
    {
        std::vector<int> path(steps, 0);
        int current_x0 = 0;
        const auto walk = [&](auto&& self, int depth, double prob) -> void {
            if (prob == 0.0) return;
            if (depth == steps) {
                for (int t = 0; t < steps; ++t)
                    for (int w = 0; w < tb.m; ++w)
                        tb.r[t](current_x0, w) += prob * triple.rho(path[t], w);
                return;
            }
            for (int y = 0; y < tb.k; ++y) {
                path[depth] = y;
                self(self, depth + 1, prob * triple.phi(path[depth - 1], y));
            }
        };
        for (int x0 = 0; x0 < tb.n; ++x0) {
            current_x0 = x0;
            for (int y0 = 0; y0 < tb.k; ++y0) {
                path[0] = y0;
                walk(walk, 1, triple.pi(x0, y0));
            }
        }
    }

    tb.joint.assign(steps, ssc::Matrix(tb.m, tb.m));
    for (int t = 0; t < steps; ++t)
        for (int x0 = 0; x0 < tb.n; ++x0) {
            const double p0 = sys.initial[x0];
            if (p0 == 0.0) continue;
            for (int wp = 0; wp < tb.m; ++wp)
                for (int wt = 0; wt < tb.m; ++wt)
                    tb.joint[t](wp, wt) += p0 * tb.r[t](x0, wp) * tb.q[t](x0, wt);
        }

    if (obs.cost_matrix) {
        tb.pair_cost.assign(steps, std::vector<double>(tb.n, 0.0));
        for (int t = 0; t < steps; ++t)
            for (int x0 = 0; x0 < tb.n; ++x0) {
                double c = 0.0;
                for (int wt = 0; wt < tb.m; ++wt)
                    for (int wp = 0; wp < tb.m; ++wp)
                        c += tb.q[t](x0, wt) * tb.r[t](x0, wp) * (*obs.cost_matrix)(wt, wp);
                tb.pair_cost[t][x0] = c;
            }
    }
    return tb;
}

inline double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

inline double joint_mi(const ssc::Matrix& j) {
    std::vector<double> rowm(j.rows(), 0.0), colm(j.cols(), 0.0);
    for (int a = 0; a < j.rows(); ++a)
        for (int b = 0; b < j.cols(); ++b) {
            rowm[a] += j(a, b);
            colm[b] += j(a, b);
        }
    double mi = 0.0;
    for (int a = 0; a < j.rows(); ++a)
        for (int b = 0; b < j.cols(); ++b)
            if (j(a, b) > 0.0) mi += j(a, b) * std::log2(j(a, b) / (rowm[a] * colm[b]));
    return mi;
}

inline double expected_cost(const Tables& tb, const ssc::MarkovSystem& sys,
                            const std::vector<std::pair<int, double>>& w, bool worst_case) {
    double total = 0.0;
    for (const auto& [t, wt] : w) {
        double at_t = 0.0;
        if (worst_case) {
            for (int x0 = 0; x0 < tb.n; ++x0) at_t = std::max(at_t, tb.pair_cost[t][x0]);
        } else {
            for (int x0 = 0; x0 < tb.n; ++x0) at_t += sys.initial[x0] * tb.pair_cost[t][x0];
        }
        total += wt * at_t;
    }
    return total;
}

inline double avg_mi_cost(const Tables& tb, const std::vector<std::pair<int, double>>& w) {
    double total = 0.0;
    for (const auto& [t, wt] : w) total -= wt * joint_mi(tb.joint[t]);
    return total;
}

inline ssc::Matrix averaged_joint(const Tables& tb, const std::vector<std::pair<int, double>>& w) {
    ssc::Matrix avg(tb.m, tb.m);
    for (const auto& [t, wt] : w)
        for (int a = 0; a < tb.m; ++a)
            for (int b = 0; b < tb.m; ++b) avg(a, b) += wt * tb.joint[t](a, b);
    return avg;
}

inline double mi_of_avg_cost(const Tables& tb, const std::vector<std::pair<int, double>>& w) {
    return -joint_mi(averaged_joint(tb, w));
}

inline double cond_entropy_cost(const Tables& tb, const std::vector<std::pair<int, double>>& w) {
    const ssc::Matrix avg = averaged_joint(tb, w);
    std::vector<double> cells, rowm(tb.m, 0.0);
    for (int a = 0; a < tb.m; ++a)
        for (int b = 0; b < tb.m; ++b) {
            cells.push_back(avg(a, b));
            rowm[a] += avg(a, b);
        }
    return entropy(cells) - entropy(rowm);
}

inline double kl_cost(const Tables& tb, const ssc::MarkovSystem& sys,
                      const std::vector<std::pair<int, double>>& w) {
    double total = 0.0;
    for (const auto& [t, wt] : w) {
        for (int x0 = 0; x0 < tb.n; ++x0) {
            if (sys.initial[x0] == 0.0) continue;
            double kl = 0.0;
            for (int o = 0; o < tb.m; ++o) {
                const double p = tb.r[t](x0, o);
                if (p <= 0.0) continue;
                const double q = tb.q[t](x0, o);
                if (q <= 0.0) return std::numeric_limits<double>::infinity();
                kl += p * std::log2(p / q);
            }
            total += wt * sys.initial[x0] * kl;
        }
    }
    return total;
}

}  // namespace oracle

#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "ssc/matrix.hpp"

namespace ssc {

// All entropies, mutual informations, and divergences are in bits,
// with the convention 0 log 0 = 0.

inline double xlog2x(double p) {
    return p > 0.0 ? p * std::log2(p) : 0.0;
}

inline double entropy_bits(std::span<const double> dist) {
    double h = 0.0;
    for (double p : dist) h -= xlog2x(p);
    return h;
}

inline double entropy_bits(const std::vector<double>& dist) {
    return entropy_bits(std::span<const double>(dist));
}

// Entropy of a joint table, summing over all cells.
inline double entropy_bits(const Matrix& joint) {
    double h = 0.0;
    for (double p : joint.data()) h -= xlog2x(p);
    return h;
}

// Marginal over the row index (the predicted symbol, by our convention).
inline std::vector<double> row_marginal(const Matrix& joint) {
    std::vector<double> out(joint.rows(), 0.0);
    for (int i = 0; i < joint.rows(); ++i)
        for (int j = 0; j < joint.cols(); ++j) out[i] += joint(i, j);
    return out;
}

// Marginal over the column index (the true symbol).
inline std::vector<double> col_marginal(const Matrix& joint) {
    std::vector<double> out(joint.cols(), 0.0);
    for (int i = 0; i < joint.rows(); ++i)
        for (int j = 0; j < joint.cols(); ++j) out[j] += joint(i, j);
    return out;
}

// I(row ; col) of a joint table. Exact zero-probability cells contribute
// nothing; rounding noise that would land an exact computation a hair
// below zero is clamped to zero.
inline double mutual_information_bits(const Matrix& joint) {
    const std::vector<double> r = row_marginal(joint);
    const std::vector<double> c = col_marginal(joint);
    double mi = 0.0;
    for (int i = 0; i < joint.rows(); ++i) {
        for (int j = 0; j < joint.cols(); ++j) {
            const double p = joint(i, j);
            if (p <= 0.0) continue;
            mi += p * std::log2(p / (r[i] * c[j]));
        }
    }
    if (mi < 0.0 && mi > -1e-12) mi = 0.0;
    return mi;
}

// H(col | row): uncertainty of the true symbol given the predicted one.
inline double conditional_entropy_true_given_pred(const Matrix& joint) {
    double h = entropy_bits(joint) - entropy_bits(row_marginal(joint));
    if (h < 0.0 && h > -1e-12) h = 0.0;
    return h;
}

// KL[p || q] in bits. Support of p outside the support of q yields +inf
// when eps == 0; with eps > 0 both arguments are eps-smoothed and
// renormalized before the divergence is taken.
inline double kl_divergence_bits(std::span<const double> p, std::span<const double> q,
                                 double eps = 0.0) {
    const std::size_t n = p.size();
    if (eps > 0.0) {
        double ps = 0.0, qs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ps += p[i] + eps;
            qs += q[i] + eps;
        }
        double kl = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double pi = (p[i] + eps) / ps;
            const double qi = (q[i] + eps) / qs;
            if (pi > 0.0) kl += pi * std::log2(pi / qi);
        }
        return kl < 0.0 && kl > -1e-12 ? 0.0 : kl;
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        kl += p[i] * std::log2(p[i] / q[i]);
    }
    if (kl < 0.0 && kl > -1e-12) kl = 0.0;
    return kl;
}

// Conditional mutual information I(A ; B | C) of a flat joint tensor with
// layout index = (a * dim_b + b) * dim_c + c.
inline double conditional_mutual_information_bits(const std::vector<double>& joint, int dim_a,
                                                  int dim_b, int dim_c) {
    std::vector<double> pc(dim_c, 0.0);
    std::vector<double> pac(static_cast<std::size_t>(dim_a) * dim_c, 0.0);
    std::vector<double> pbc(static_cast<std::size_t>(dim_b) * dim_c, 0.0);
    for (int a = 0; a < dim_a; ++a)
        for (int b = 0; b < dim_b; ++b)
            for (int c = 0; c < dim_c; ++c) {
                const double p = joint[(static_cast<std::size_t>(a) * dim_b + b) * dim_c + c];
                pc[c] += p;
                pac[static_cast<std::size_t>(a) * dim_c + c] += p;
                pbc[static_cast<std::size_t>(b) * dim_c + c] += p;
            }
    double mi = 0.0;
    for (int a = 0; a < dim_a; ++a)
        for (int b = 0; b < dim_b; ++b)
            for (int c = 0; c < dim_c; ++c) {
                const double p = joint[(static_cast<std::size_t>(a) * dim_b + b) * dim_c + c];
                if (p <= 0.0) continue;
                mi += p * std::log2(p * pc[c] /
                                    (pac[static_cast<std::size_t>(a) * dim_c + c] *
                                     pbc[static_cast<std::size_t>(b) * dim_c + c]));
            }
    if (mi < 0.0 && mi > -1e-12) mi = 0.0;
    return mi;
}

}  // namespace ssc

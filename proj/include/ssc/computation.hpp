#pragma once

#include <cmath>

#include "ssc/info.hpp"
#include "ssc/matrix.hpp"
#include "ssc/model.hpp"

namespace ssc {

// E_w[t], the expected number of iteration steps under the weight function.
inline double expected_horizon(const std::vector<std::pair<int, double>>& terms) {
    double e = 0.0;
    for (const auto& [t, wt] : terms) e += wt * t;
    return e;
}

inline double expected_horizon(const WeightSpec& w) {
    return expected_horizon(weight_vector(w));
}

// Computation-cost proxies. The literal costs discussed alongside the
// framework (wall-clock, description length, logical depth) have no usable
// closed form, so the contract is these three:
//
//   cardinality              log2(k) * E_w[t]  -- state-description length
//                            per step times the expected step count
//   sparsity                 nnz(pi)/n + E_w[t]*nnz(phi)/k + nnz(rho)/k
//                            -- average nonzeros touched per pipeline stage
//   init_entropy_plus_sparsity
//                            H(Y0) + E_w[t]*nnz(phi)/k + nnz(rho)/k
//                            -- the initialization term is the entropy of
//                            y0 under p0 pushed through pi
inline double computation_cost(const CompCostModel& model, const MarkovSystem& sys,
                               const CompressionTriple& triple, const WeightSpec& w) {
    if (model.nnz_threshold < 0.0) throw ConfigError("nnz threshold must be nonnegative");
    const double steps = expected_horizon(w);
    const int n = triple.pi.rows();
    const int k = triple.macro_count();
    switch (model.kind) {
        case CompCostKind::cardinality:
            return std::log2(static_cast<double>(k)) * steps;
        case CompCostKind::sparsity:
            return static_cast<double>(count_nonzero(triple.pi, model.nnz_threshold)) / n +
                   steps * count_nonzero(triple.phi, model.nnz_threshold) / k +
                   static_cast<double>(count_nonzero(triple.rho, model.nnz_threshold)) / k;
        case CompCostKind::init_entropy_plus_sparsity: {
            const std::vector<double> y0 = vec_mat(sys.initial, triple.pi);
            return entropy_bits(y0) +
                   steps * count_nonzero(triple.phi, model.nnz_threshold) / k +
                   static_cast<double>(count_nonzero(triple.rho, model.nnz_threshold)) / k;
        }
    }
    throw ConfigError("unknown computation cost kind");
}

}  // namespace ssc

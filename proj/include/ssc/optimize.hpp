#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ssc/accuracy.hpp"
#include "ssc/computation.hpp"
#include "ssc/model.hpp"
#include "ssc/partition.hpp"
#include "ssc/rng.hpp"

namespace ssc {

enum class OptimizeMethod { exhaustive, anneal };

struct OptimizerConfig {
    OptimizeMethod method = OptimizeMethod::exhaustive;
    int k_max = 0;  // 0 means "use n"
    int anneal_iters = 20000;
    double t0 = 1.0;
    double cooling = 0.995;
    std::uint64_t seed = 0;
    RefDist ref_dist = RefDist::w_averaged_occupancy;
    RhoMode rho_mode = RhoMode::bayes;
    bool collect_trace = false;
};

struct ObjectiveBreakdown {
    double k_value = 0.0;
    double accuracy = 0.0;
    double computation = 0.0;
};

struct OptimizationResult {
    CompressionTriple best_triple;
    Partition best_partition;
    double k_value = 0.0;
    double accuracy_component = 0.0;
    double computation_component = 0.0;
    long evaluations = 0;
    std::vector<std::pair<long, double>> trace;  // (iteration, K of the candidate)
};

namespace detail {

inline void check_objective(const ObjectiveConfig& cfg, const Observable& obs) {
    if (!(cfg.kappa >= 0.0) || !(cfg.alpha >= 0.0) || !std::isfinite(cfg.kappa) ||
        !std::isfinite(cfg.alpha)) {
        throw ConfigError("kappa and alpha must be finite and nonnegative");
    }
    if (cfg.kappa == 0.0 && cfg.alpha == 0.0) {
        throw ConfigError("at least one of kappa, alpha must be positive");
    }
    if ((cfg.accuracy_kind == AccuracyKind::expected ||
         cfg.accuracy_kind == AccuracyKind::expected_worst_case) &&
        !obs.cost_matrix) {
        throw ConfigError("expected accuracy cost requires a cost matrix");
    }
}

}  // namespace detail

// K = kappa * computation + alpha * accuracy with the configured cost
// functions.
inline ObjectiveBreakdown objective_K(const MarkovSystem& sys, const Observable& obs,
                                      const CompressionTriple& triple, const WeightSpec& w,
                                      const ObjectiveConfig& cfg) {
    detail::check_objective(cfg, obs);
    ObjectiveBreakdown out;
    out.accuracy = accuracy_cost(cfg.accuracy_kind, sys, obs, triple, w, cfg.kl_smoothing);
    out.computation = computation_cost(cfg.comp_model, sys, triple, w);
    out.k_value = cfg.kappa * out.computation + cfg.alpha * out.accuracy;
    return out;
}

namespace detail {

// Shared state for evaluating many induced triples on one instance.
struct SearchContext {
    const MarkovSystem* sys;
    const Observable* obs;
    const WeightSpec* w;
    const ObjectiveConfig* cfg;
    RefDist ref_dist;
    RhoMode rho_mode;
    AccuracyContext acc;

    struct Scored {
        CompressionTriple triple;
        ObjectiveBreakdown score;
    };

    Scored evaluate(const Partition& p) const {
        Scored s;
        s.triple = induced_triple(p, *sys, *obs, *w, ref_dist, rho_mode);
        const TripleCache rs(s.triple, acc.max_t);
        s.score.accuracy = accuracy_from_context(acc, rs, cfg->accuracy_kind, cfg->kl_smoothing);
        s.score.computation = computation_cost(cfg->comp_model, *sys, s.triple, *w);
        s.score.k_value = cfg->kappa * s.score.computation + cfg->alpha * s.score.accuracy;
        return s;
    }
};

inline SearchContext make_search_context(const MarkovSystem& sys, const Observable& obs,
                                         const WeightSpec& w, const ObjectiveConfig& cfg,
                                         const OptimizerConfig& opt) {
    check_objective(cfg, obs);
    return SearchContext{&sys,        &obs,         &w,
                         &cfg,        opt.ref_dist, opt.rho_mode,
                         make_accuracy_context(sys, obs, w)};
}

inline int effective_k_max(const OptimizerConfig& opt, int n) {
    const int k = opt.k_max == 0 ? n : opt.k_max;
    if (k < 1 || k > n) throw ConfigError("k_max must lie in [1, n]");
    return k;
}

}  // namespace detail

// Global minimum of K over all induced triples of partitions with at most
// k_max blocks. Ties are broken by canonical enumeration order (first
// encountered wins). Guarded to n <= 12.
inline OptimizationResult exhaustive_optimize(const MarkovSystem& sys, const Observable& obs,
                                              const WeightSpec& w, const ObjectiveConfig& cfg,
                                              const OptimizerConfig& opt) {
    const auto ctx = detail::make_search_context(sys, obs, w, cfg, opt);
    const int k_max = detail::effective_k_max(opt, sys.size());

    OptimizationResult result;
    result.k_value = std::numeric_limits<double>::infinity();
    PartitionEnumerator en(sys.size(), k_max);
    long iteration = 0;
    while (auto p = en.next()) {
        const auto scored = ctx.evaluate(*p);
        if (opt.collect_trace) result.trace.emplace_back(iteration, scored.score.k_value);
        if (scored.score.k_value < result.k_value) {
            result.k_value = scored.score.k_value;
            result.accuracy_component = scored.score.accuracy;
            result.computation_component = scored.score.computation;
            result.best_triple = scored.triple;
            result.best_partition = *p;
        }
        ++iteration;
    }
    result.evaluations = iteration;
    return result;
}

// Seeded simulated annealing over partitions. A move relocates one
// uniformly chosen state to a uniformly chosen block, with a fresh block
// allowed while the count is below k_max; acceptance follows
// min(1, exp(-dK / temperature)) with temperature t0 * cooling^iteration.
// anneal_iters counts evaluations including the initial one. Identical
// inputs and seed reproduce the result exactly.
inline OptimizationResult anneal_optimize(const MarkovSystem& sys, const Observable& obs,
                                          const WeightSpec& w, const ObjectiveConfig& cfg,
                                          const OptimizerConfig& opt) {
    const auto ctx = detail::make_search_context(sys, obs, w, cfg, opt);
    const int n = sys.size();
    const int k_max = detail::effective_k_max(opt, n);
    if (opt.anneal_iters < 1) throw ConfigError("anneal_iters must be at least 1");
    if (!(opt.cooling > 0.0 && opt.cooling < 1.0)) throw ConfigError("cooling must lie in (0,1)");

    SplitMix64 rng(opt.seed);

    // Random restricted-growth initial assignment.
    std::vector<int> raw(n, 0);
    int max_label = 0;
    for (int x = 1; x < n; ++x) {
        const int limit = std::min(max_label + 1, k_max - 1);
        raw[x] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(limit) + 1));
        max_label = std::max(max_label, raw[x]);
    }
    Partition current = Partition::from_assignment(raw);
    auto current_scored = ctx.evaluate(current);

    OptimizationResult result;
    result.best_partition = current;
    result.best_triple = current_scored.triple;
    result.k_value = current_scored.score.k_value;
    result.accuracy_component = current_scored.score.accuracy;
    result.computation_component = current_scored.score.computation;
    result.evaluations = 1;
    if (opt.collect_trace) result.trace.emplace_back(0, current_scored.score.k_value);

    double temperature = opt.t0;
    for (long iter = 1; iter < opt.anneal_iters; ++iter) {
        temperature *= opt.cooling;

        const int state = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        const int k_cur = current.block_count();
        const bool can_open = k_cur < k_max;
        const int choices = k_cur + (can_open ? 1 : 0);
        const int target = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(choices)));

        std::vector<int> proposal_raw = current.assignment;
        proposal_raw[state] = target;  // target == k_cur opens a fresh block
        const Partition proposal = Partition::from_assignment(proposal_raw);

        const auto scored = ctx.evaluate(proposal);
        ++result.evaluations;
        if (opt.collect_trace) result.trace.emplace_back(iter, scored.score.k_value);

        const double delta = scored.score.k_value - current_scored.score.k_value;
        bool accept = false;
        if (!(delta > 0.0)) {
            accept = true;  // covers equal values and an infinite incumbent
        } else if (temperature > 0.0) {
            accept = rng.next_double() < std::exp(-delta / temperature);
        }
        if (accept) {
            current = proposal;
            current_scored = scored;
            if (scored.score.k_value < result.k_value) {
                result.k_value = scored.score.k_value;
                result.accuracy_component = scored.score.accuracy;
                result.computation_component = scored.score.computation;
                result.best_triple = scored.triple;
                result.best_partition = proposal;
            }
        }
    }
    return result;
}

inline OptimizationResult optimize(const MarkovSystem& sys, const Observable& obs,
                                   const WeightSpec& w, const ObjectiveConfig& cfg,
                                   const OptimizerConfig& opt) {
    return opt.method == OptimizeMethod::exhaustive ? exhaustive_optimize(sys, obs, w, cfg, opt)
                                                    : anneal_optimize(sys, obs, w, cfg, opt);
}

struct ParetoEntry {
    double alpha = 0.0;
    OptimizationResult result;
    bool on_front = false;
};

// Scalarized sweep over alpha with kappa fixed at 1; entries whose
// (computation, accuracy) pair is not dominated are marked as the front.
inline std::vector<ParetoEntry> pareto_sweep(const MarkovSystem& sys, const Observable& obs,
                                             const WeightSpec& w, const ObjectiveConfig& cfg_base,
                                             const std::vector<double>& alphas,
                                             const OptimizerConfig& opt) {
    if (alphas.empty()) throw ConfigError("pareto sweep needs at least one alpha");
    std::vector<ParetoEntry> entries;
    entries.reserve(alphas.size());
    for (double alpha : alphas) {
        ObjectiveConfig cfg = cfg_base;
        cfg.kappa = 1.0;
        cfg.alpha = alpha;
        entries.push_back(ParetoEntry{alpha, optimize(sys, obs, w, cfg, opt), false});
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double ci = entries[i].result.computation_component;
        const double ai = entries[i].result.accuracy_component;
        bool dominated = false;
        for (std::size_t j = 0; j < entries.size() && !dominated; ++j) {
            if (j == i) continue;
            const double cj = entries[j].result.computation_component;
            const double aj = entries[j].result.accuracy_component;
            dominated = cj <= ci && aj <= ai && (cj < ci || aj < ai);
        }
        entries[i].on_front = !dominated;
    }
    return entries;
}

}  // namespace ssc

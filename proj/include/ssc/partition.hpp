#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ssc/matrix.hpp"
#include "ssc/model.hpp"

namespace ssc {

// Hard partition of the microstate space into blocks, stored as a
// restricted growth string: block labels appear in order of first
// occurrence, so every partition has exactly one representation.
struct Partition {
    std::vector<int> assignment;

    int size() const { return static_cast<int>(assignment.size()); }

    int block_count() const {
        int k = 0;
        for (int b : assignment) k = std::max(k, b + 1);
        return k;
    }

    // Relabels an arbitrary block assignment into canonical form.
    static Partition from_assignment(const std::vector<int>& raw) {
        Partition p;
        p.assignment.reserve(raw.size());
        std::vector<int> relabel(raw.size(), -1);
        int next = 0;
        for (int b : raw) {
            if (b < 0 || b >= static_cast<int>(raw.size()))
                throw ConfigError("block index " + std::to_string(b) + " out of range");
            if (relabel[b] == -1) relabel[b] = next++;
            p.assignment.push_back(relabel[b]);
        }
        return p;
    }

    std::vector<std::vector<int>> blocks() const {
        std::vector<std::vector<int>> out(block_count());
        for (int x = 0; x < size(); ++x) out[assignment[x]].push_back(x);
        return out;
    }

    friend bool operator==(const Partition&, const Partition&) = default;
};

inline constexpr int kMaxExhaustiveStates = 12;

// Generates every set partition of {0..n-1} with at most k_max blocks,
// exactly once, in lexicographic restricted-growth-string order.
class PartitionEnumerator {
public:
    PartitionEnumerator(int n, int k_max) : n_(n), k_max_(k_max) {
        if (n < 1) throw ConfigError("partition enumeration requires n >= 1");
        if (k_max < 1 || k_max > n) throw ConfigError("k_max must lie in [1, n]");
        if (n > kMaxExhaustiveStates) {
            throw ConfigError("partition enumeration is limited to n <= " +
                              std::to_string(kMaxExhaustiveStates) +
                              " states; use the annealing optimizer for larger systems");
        }
        a_.assign(n, 0);
    }

    std::optional<Partition> next() {
        if (done_) return std::nullopt;
        Partition current{a_};
        // Advance the odometer: rightmost digit that can still grow.
        for (int i = n_ - 1; i >= 1; --i) {
            int prefix_max = 0;
            for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, a_[j]);
            if (a_[i] <= prefix_max && a_[i] + 1 <= k_max_ - 1) {
                ++a_[i];
                std::fill(a_.begin() + i + 1, a_.end(), 0);
                return current;
            }
        }
        done_ = true;
        return current;
    }

private:
    int n_;
    int k_max_;
    std::vector<int> a_;
    bool done_ = false;
};

inline std::vector<Partition> enumerate_partitions(int n, int k_max) {
    std::vector<Partition> out;
    PartitionEnumerator en(n, k_max);
    while (auto p = en.next()) out.push_back(std::move(*p));
    return out;
}

// Kemeny-Snell strong lumpability: within each block, all states must have
// identical block-aggregated transition rows.
inline bool lumpability_test(const Partition& partition, const MarkovSystem& sys,
                             double tol = 1e-10) {
    const int n = sys.size();
    if (partition.size() != n) throw ConfigError("partition size does not match the system");
    const int k = partition.block_count();
    Matrix aggregated(n, k);
    for (int x = 0; x < n; ++x)
        for (int x1 = 0; x1 < n; ++x1)
            aggregated(x, partition.assignment[x1]) += sys.transition(x, x1);
    for (const auto& block : partition.blocks()) {
        for (std::size_t i = 1; i < block.size(); ++i) {
            for (int b = 0; b < k; ++b) {
                if (std::abs(aggregated(block[0], b) - aggregated(block[i], b)) > tol)
                    return false;
            }
        }
    }
    return true;
}

// Reference distribution over X used to weight states within blocks when
// aggregating P and the channel.
enum class RefDist { w_averaged_occupancy, stationary, uniform };

enum class RhoMode {
    bayes,        // posterior observable distribution per block
    argmin_cost,  // deterministic predictor minimizing expected C per block
};

namespace detail {

inline std::vector<double> occupancy_reference(const MarkovSystem& sys, const WeightSpec& w) {
    std::vector<double> occ(sys.size(), 0.0);
    std::vector<double> p = sys.initial;
    int reached = 0;
    for (const auto& [t, wt] : weight_vector(w)) {
        while (reached < t) {
            p = vec_mat(p, sys.transition);
            ++reached;
        }
        for (int x = 0; x < sys.size(); ++x) occ[x] += wt * p[x];
    }
    return occ;
}

// Cesaro-averaged power iteration; converges for every finite chain and is
// deterministic, unlike a spectral solve.
inline std::vector<double> stationary_reference(const MarkovSystem& sys) {
    const int n = sys.size();
    std::vector<double> p(n, 1.0 / n);
    std::vector<double> avg(n, 0.0);
    std::vector<double> prev_avg(n, 0.0);
    const int max_iters = 20000;
    for (int it = 1; it <= max_iters; ++it) {
        for (int x = 0; x < n; ++x) avg[x] += (p[x] - avg[x]) / it;
        if (it % 32 == 0) {
            double delta = 0.0;
            for (int x = 0; x < n; ++x) delta += std::abs(avg[x] - prev_avg[x]);
            if (delta < 1e-14) break;
            prev_avg = avg;
        }
        p = vec_mat(p, sys.transition);
    }
    double total = 0.0;
    for (double v : avg) total += v;
    for (double& v : avg) v /= total;
    return avg;
}

}  // namespace detail

// Builds the triple a hard partition induces: pi is the deterministic block
// indicator, phi aggregates P over blocks under the reference weights, and
// rho is the block-conditional observable distribution (or the deterministic
// argmin-C predictor). Blocks carrying zero reference mass fall back to
// uniform weights over their members.
inline CompressionTriple induced_triple(const Partition& partition, const MarkovSystem& sys,
                                        const Observable& obs, const WeightSpec& w,
                                        RefDist ref_dist = RefDist::w_averaged_occupancy,
                                        RhoMode rho_mode = RhoMode::bayes) {
    const int n = sys.size();
    if (partition.size() != n) throw ConfigError("partition size does not match the system");
    const int k = partition.block_count();
    const int m = obs.count();

    std::vector<double> ref;
    switch (ref_dist) {
        case RefDist::w_averaged_occupancy: ref = detail::occupancy_reference(sys, w); break;
        case RefDist::stationary: ref = detail::stationary_reference(sys); break;
        case RefDist::uniform: ref.assign(n, 1.0 / n); break;
    }

    Matrix pi(n, k);
    for (int x = 0; x < n; ++x) pi(x, partition.assignment[x]) = 1.0;

    const auto blocks = partition.blocks();
    std::vector<double> within(n, 0.0);
    for (const auto& block : blocks) {
        double mass = 0.0;
        for (int x : block) mass += ref[x];
        if (mass > 0.0) {
            for (int x : block) within[x] = ref[x] / mass;
        } else {
            for (int x : block) within[x] = 1.0 / static_cast<double>(block.size());
        }
    }

    Matrix phi(k, k);
    Matrix block_obs(k, m);
    for (int b = 0; b < k; ++b) {
        for (int x : blocks[b]) {
            const double wx = within[x];
            if (wx == 0.0) continue;
            for (int x1 = 0; x1 < n; ++x1)
                phi(b, partition.assignment[x1]) += wx * sys.transition(x, x1);
            for (int o = 0; o < m; ++o) block_obs(b, o) += wx * obs.channel(x, o);
        }
    }

    Matrix rho(k, m);
    if (rho_mode == RhoMode::bayes) {
        rho = block_obs;
    } else {
        if (!obs.cost_matrix) throw ConfigError("argmin-cost rho requires a cost matrix");
        const Matrix& cost = *obs.cost_matrix;
        for (int b = 0; b < k; ++b) {
            int best = 0;
            double best_cost = std::numeric_limits<double>::infinity();
            for (int pred = 0; pred < m; ++pred) {
                double c = 0.0;
                for (int o = 0; o < m; ++o) c += block_obs(b, o) * cost(o, pred);
                if (c < best_cost) {  // ties keep the lowest index
                    best_cost = c;
                    best = pred;
                }
            }
            rho(b, best) = 1.0;
        }
    }
    return CompressionTriple{std::move(pi), std::move(phi), std::move(rho)};
}

}  // namespace ssc

#pragma once

// Shared test helpers: seeded random instances of systems, observables,
// triples, and weight specs.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ssc/model.hpp"
#include "ssc/rng.hpp"

namespace testsup {

// Random stochastic row via normalized exponentials (Dirichlet(1,...,1)),
// so every entry is strictly positive.
inline std::vector<double> random_dist(ssc::SplitMix64& rng, int n) {
    std::vector<double> v(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = -std::log(1.0 - rng.next_double());
        total += v[i];
    }
    for (double& x : v) x /= total;
    return v;
}

inline ssc::Matrix random_stochastic(ssc::SplitMix64& rng, int rows, int cols) {
    ssc::Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto row = random_dist(rng, cols);
        for (int c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
}

inline ssc::MarkovSystem random_system(ssc::SplitMix64& rng, int n) {
    return ssc::MarkovSystem{random_stochastic(rng, n, n), random_dist(rng, n)};
}

inline ssc::Observable random_observable(ssc::SplitMix64& rng, int n, int m,
                                         bool with_cost = false) {
    ssc::Observable obs{random_stochastic(rng, n, m), std::nullopt};
    if (with_cost) {
        ssc::Matrix cost(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) cost(i, j) = i == j ? 0.0 : 0.25 + rng.next_double();
        obs.cost_matrix = cost;
    }
    return obs;
}

inline ssc::CompressionTriple random_triple(ssc::SplitMix64& rng, int n, int k, int m) {
    return ssc::CompressionTriple{random_stochastic(rng, n, k), random_stochastic(rng, k, k),
                                  random_stochastic(rng, k, m)};
}

inline ssc::WeightSpec random_weight(ssc::SplitMix64& rng, int max_horizon) {
    ssc::WeightSpec w;
    w.include_t0 = rng.next_below(2) == 1;
    w.horizon = 1 + static_cast<int>(rng.next_below(max_horizon));
    if (rng.next_below(2) == 1) {
        w.kind = ssc::WeightKind::geometric;
        w.gamma = 0.2 + 0.6 * rng.next_double();
    } else {
        w.kind = ssc::WeightKind::uniform;
    }
    return w;
}

// Uniform-noise compression map: every microstate maps to a uniform
// macrostate, independent of its argument.
inline ssc::Matrix noise_pi(int n, int k) {
    return ssc::Matrix(n, k, 1.0 / k);
}

}  // namespace testsup

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssc/matrix.hpp"
#include "ssc/model.hpp"
#include "ssc/partition.hpp"

namespace ssc {

// Named benchmark instances used throughout the tests and docs. Each one
// isolates a single phenomenon:
//
//   SWAP2  two frozen states predicted through value-swapping macro
//          dynamics; per-time MI stays maximal while the time-averaged
//          joint carries none, so the two MI costs disagree maximally
//   IID4   pure noise; nothing predicts anything, so the single-macrostate
//          compression is as accurate as the identity and far cheaper
//   LUMP4  strongly lumpable 4-chain whose {0,1},{2,3} blocks evolve as an
//          exact 2-state chain
//   CYL    a 50-state piston: deterministic partition position times
//          5 mixing nuisance configurations; projecting onto the position
//          predicts perfectly at every horizon
//   RING8  lazy biased ring walk observed through 4 coarse arcs; its
//          accuracy/computation trade-off has a visible Pareto front
struct ExampleSystem {
    std::string name;
    MarkovSystem sys;
    Observable obs;
    std::optional<CompressionTriple> reference;
    WeightSpec default_weight;
};

inline const std::vector<std::string>& example_names() {
    static const std::vector<std::string> names = {"SWAP2", "IID4", "LUMP4", "CYL", "RING8"};
    return names;
}

namespace detail {

inline ExampleSystem build_swap2() {
    ExampleSystem e;
    e.name = "SWAP2";
    e.sys = MarkovSystem{Matrix::identity(2), {0.5, 0.5}};
    Matrix cost(2, 2, {0.0, 1.0, 1.0, 0.0});
    e.obs = Observable{Matrix::identity(2), cost};
    Matrix swap(2, 2, {0.0, 1.0, 1.0, 0.0});
    e.reference = CompressionTriple{Matrix::identity(2), swap, Matrix::identity(2)};
    e.default_weight = WeightSpec::uniform(1, /*include_t0=*/true);
    return e;
}

inline ExampleSystem build_iid4() {
    ExampleSystem e;
    e.name = "IID4";
    Matrix p(4, 4, 0.25);
    e.sys = MarkovSystem{p, {0.25, 0.25, 0.25, 0.25}};
    e.obs = Observable{Matrix::identity(4), std::nullopt};
    // Singleton compression: one macrostate, uniform predictions.
    Matrix pi(4, 1, 1.0);
    Matrix phi(1, 1, 1.0);
    Matrix rho(1, 4, 0.25);
    e.reference = CompressionTriple{pi, phi, rho};
    e.default_weight = WeightSpec::uniform(2);
    return e;
}

inline ExampleSystem build_lump4() {
    ExampleSystem e;
    e.name = "LUMP4";
    Matrix p(4, 4,
             {0.1, 0.2, 0.3, 0.4,     //
              0.3, 0.0, 0.5, 0.2,     //
              0.25, 0.25, 0.25, 0.25, //
              0.4, 0.1, 0.2, 0.3});
    e.sys = MarkovSystem{p, {0.25, 0.25, 0.25, 0.25}};
    Matrix channel(4, 2, {1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0});
    e.obs = Observable{channel, std::nullopt};
    e.default_weight = WeightSpec::uniform(5);
    const Partition blocks = Partition::from_assignment({0, 0, 1, 1});
    e.reference = induced_triple(blocks, e.sys, e.obs, e.default_weight);
    return e;
}

inline ExampleSystem build_cyl() {
    ExampleSystem e;
    e.name = "CYL";
    constexpr int kPositions = 10;
    constexpr int kNuisance = 5;
    constexpr int n = kPositions * kNuisance;
    const auto id = [](int z, int g) { return z * kNuisance + g; };

    Matrix p(n, n);
    for (int z = 0; z < kPositions; ++z) {
        const int z_next = z > 0 ? z - 1 : 0;  // partition slides down, absorbing at 0
        for (int g = 0; g < kNuisance; ++g)
            for (int g1 = 0; g1 < kNuisance; ++g1)
                p(id(z, g), id(z_next, g1)) = 1.0 / kNuisance;
    }
    std::vector<double> initial(n, 0.0);
    for (int g = 0; g < kNuisance; ++g) initial[id(kPositions - 1, g)] = 1.0 / kNuisance;
    e.sys = MarkovSystem{p, initial};

    Matrix channel(n, kPositions);
    for (int z = 0; z < kPositions; ++z)
        for (int g = 0; g < kNuisance; ++g) channel(id(z, g), z) = 1.0;
    Matrix cost(kPositions, kPositions);
    for (int a = 0; a < kPositions; ++a)
        for (int b = 0; b < kPositions; ++b) cost(a, b) = std::abs(a - b);
    e.obs = Observable{channel, cost};

    // z-projection compression: track the partition position only.
    Matrix pi(n, kPositions);
    for (int z = 0; z < kPositions; ++z)
        for (int g = 0; g < kNuisance; ++g) pi(id(z, g), z) = 1.0;
    Matrix phi(kPositions, kPositions);
    phi(0, 0) = 1.0;
    for (int z = 1; z < kPositions; ++z) phi(z, z - 1) = 1.0;
    e.reference = CompressionTriple{pi, phi, Matrix::identity(kPositions)};
    e.default_weight = WeightSpec::uniform(20, /*include_t0=*/true);
    return e;
}

inline ExampleSystem build_ring8() {
    ExampleSystem e;
    e.name = "RING8";
    constexpr int n = 8;
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        p(i, i) = 0.2;
        p(i, (i + 1) % n) = 0.6;
        p(i, (i + n - 1) % n) = 0.2;
    }
    e.sys = MarkovSystem{p, std::vector<double>(n, 1.0 / n)};
    constexpr int kArcs = 4;
    Matrix channel(n, kArcs);
    for (int i = 0; i < n; ++i) channel(i, i / 2) = 1.0;
    Matrix cost(kArcs, kArcs);
    for (int a = 0; a < kArcs; ++a)
        for (int b = 0; b < kArcs; ++b) cost(a, b) = std::min(std::abs(a - b), kArcs - std::abs(a - b));
    e.obs = Observable{channel, cost};
    e.default_weight = WeightSpec::geometric(0.3, 12);
    return e;
}

}  // namespace detail

inline ExampleSystem build_example(const std::string& name) {
    if (name == "SWAP2") return detail::build_swap2();
    if (name == "IID4") return detail::build_iid4();
    if (name == "LUMP4") return detail::build_lump4();
    if (name == "CYL") return detail::build_cyl();
    if (name == "RING8") return detail::build_ring8();
    throw ConfigError("unknown example '" + name + "'; known names: SWAP2 IID4 LUMP4 CYL RING8");
}

}  // namespace ssc

#include <catch2/catch_amalgamated.hpp>

#include "ssc/corpus.hpp"
#include "ssc/model.hpp"
#include "ssc/rng.hpp"
#include "support.hpp"

using namespace ssc;

TEST_CASE("corpus systems validate cleanly") {
    for (const auto& name : example_names()) {
        const ExampleSystem e = build_example(name);
        const auto report = validate_system(e.sys, e.obs);
        INFO(name);
        CHECK(report.errors.empty());
        if (e.reference) {
            CHECK(validate_triple(*e.reference, e.sys, e.obs).errors.empty());
        }
    }
}

TEST_CASE("validate_system flags a short transition row with its index") {
    MarkovSystem sys{Matrix(2, 2, {0.5, 0.4, 0.5, 0.5}), {0.5, 0.5}};
    Observable obs{Matrix::identity(2), std::nullopt};
    const auto report = validate_system(sys, obs);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].find("row 0") != std::string::npos);
}

TEST_CASE("validate_system flags a negative initial entry") {
    MarkovSystem sys{Matrix::identity(2), {1.2, -0.2}};
    Observable obs{Matrix::identity(2), std::nullopt};
    const auto report = validate_system(sys, obs);
    REQUIRE_FALSE(report.valid());
    bool found = false;
    for (const auto& e : report.errors) found = found || e.find("initial entry 1") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate_system warns when a cost diagonal is not the row minimum") {
    Matrix cost(2, 2, {0.5, 0.1, 1.0, 0.0});
    MarkovSystem sys{Matrix::identity(2), {0.5, 0.5}};
    Observable obs{Matrix::identity(2), cost};
    const auto report = validate_system(sys, obs);
    CHECK(report.valid());
    REQUIRE(report.warnings.size() == 1);
}

TEST_CASE("validate_triple reports dimension and stochasticity violations") {
    const ExampleSystem e = build_example("SWAP2");
    CHECK(validate_triple(identity_triple(e.sys, e.obs), e.sys, e.obs).valid());

    CompressionTriple bad_rows{Matrix::identity(3), Matrix::identity(3), Matrix(3, 2, 0.5)};
    CHECK_FALSE(validate_triple(bad_rows, e.sys, e.obs).valid());

    CompressionTriple bad_phi{Matrix::identity(2), Matrix(2, 2, {1.0, 0.5, 0.0, 1.0}),
                              Matrix::identity(2)};
    const auto report = validate_triple(bad_phi, e.sys, e.obs);
    REQUIRE_FALSE(report.valid());
    CHECK(report.errors[0].find("phi") != std::string::npos);
}

TEST_CASE("validation is deterministic") {
    MarkovSystem sys{Matrix(2, 2, {0.5, 0.4, -0.1, 1.1}), {0.7, 0.2}};
    Observable obs{Matrix(2, 2, {1.0, 0.1, 0.0, 1.0}), std::nullopt};
    const auto a = validate_system(sys, obs);
    const auto b = validate_system(sys, obs);
    CHECK(a.errors == b.errors);
    CHECK(a.warnings == b.warnings);
}

TEST_CASE("weight_vector matches the worked values") {
    SECTION("uniform, T=2, future only") {
        const auto w = weight_vector(WeightSpec::uniform(2));
        REQUIRE(w.size() == 2);
        CHECK(w[0] == std::pair{1, 0.5});
        CHECK(w[1] == std::pair{2, 0.5});
    }
    SECTION("geometric gamma=0.5, T=2, with t0") {
        const auto w = weight_vector(WeightSpec::geometric(0.5, 2, true));
        REQUIRE(w.size() == 3);
        CHECK(w[0].second == Catch::Approx(4.0 / 7.0).margin(1e-15));
        CHECK(w[1].second == Catch::Approx(2.0 / 7.0).margin(1e-15));
        CHECK(w[2].second == Catch::Approx(1.0 / 7.0).margin(1e-15));
    }
    SECTION("degenerate discount gamma=1") {
        const auto w = weight_vector(WeightSpec::geometric(1.0, 3, true));
        REQUIRE(w.size() == 4);
        CHECK(w[0].second == 1.0);
        CHECK(w[1].second == 0.0);
        CHECK(w[3].second == 0.0);
    }
    SECTION("empty support") {
        CHECK_THROWS_AS(weight_vector(WeightSpec::uniform(0, false)), ConfigError);
        CHECK_THROWS_AS(weight_vector(WeightSpec::geometric(1.0, 3, false)), ConfigError);
    }
}

TEST_CASE("weight_vector always normalizes") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightSpec spec = testsup::random_weight(rng, 12);
        const auto w = weight_vector(spec);
        double total = 0.0;
        for (const auto& [t, wt] : w) {
            CHECK(wt >= 0.0);
            total += wt;
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("identity_triple reproduces the system") {
    const ExampleSystem swap2 = build_example("SWAP2");
    const CompressionTriple id = identity_triple(swap2.sys, swap2.obs);
    CHECK(id.pi == Matrix::identity(2));
    CHECK(id.phi == Matrix::identity(2));  // SWAP2's P is the identity
    CHECK(id.rho == Matrix::identity(2));

    const ExampleSystem iid4 = build_example("IID4");
    const CompressionTriple id4 = identity_triple(iid4.sys, iid4.obs);
    CHECK(id4.macro_count() == 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(id4.phi(r, c) == 0.25);

    const ExampleSystem lump4 = build_example("LUMP4");
    CHECK(identity_triple(lump4.sys, lump4.obs).phi == lump4.sys.transition);

    SplitMix64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(5));
        const MarkovSystem sys = testsup::random_system(rng, n);
        const Observable obs = testsup::random_observable(rng, n, 3);
        CHECK(validate_triple(identity_triple(sys, obs), sys, obs).valid());
    }
}

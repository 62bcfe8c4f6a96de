#include <doctest.h>

#include <cmath>
#include <random>

#include "mdboost/error.hpp"
#include "mdboost/weak_learner.hpp"
#include "oracles.hpp"

using namespace mdboost;

TEST_CASE("separable pair")
{
    const Dataset d({0.0, 1.0}, 1, {-1, 1});
    const std::vector<double> u{0.5, 0.5};
    const auto best = best_stump(d, u);
    CHECK(best.stump == Stump{0, 0.5, 1});
    CHECK(best.edge == doctest::Approx(1.0));

    const Dataset flipped({0.0, 1.0}, 1, {1, -1});
    const auto other = best_stump(flipped, u);
    CHECK(other.stump == Stump{0, 0.5, -1});
    CHECK(other.edge == doctest::Approx(1.0));
}

TEST_CASE("zero weights return the canonical first candidate")
{
    const Dataset d({0.0, 1.0, 2.0}, 1, {-1, 1, 1});
    const std::vector<double> u(3, 0.0);
    const auto best = best_stump(d, u);
    CHECK(best.edge == 0.0);
    CHECK(best.stump == Stump{0, below_min_threshold(), 1});
}

TEST_CASE("constant feature falls back to sentinels")
{
    const Dataset d({4.0, 4.0, 4.0}, 1, {1, 1, -1});
    const std::vector<double> u(3, 1.0 / 3.0);
    const auto best = best_stump(d, u);
    CHECK(best.edge == doctest::Approx(1.0 / 3.0));
    CHECK(best.stump.polarity == 1);
    CHECK(best.stump.threshold == below_min_threshold());
}

TEST_CASE("edge")
{
    const Dataset d({0.0, 1.0, 2.0, 3.0}, 1, {-1, -1, 1, 1});
    const std::vector<double> u(4, 0.25);
    CHECK(edge(Stump{0, 1.5, 1}, d, u) == doctest::Approx(1.0));
    CHECK(edge(Stump{0, 1.5, -1}, d, u) == doctest::Approx(-1.0));
    const std::vector<double> mixed{0.3, -1.2, 2.0, -0.7};
    const Stump s{0, 0.5, -1};
    double expected = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        expected += mixed[i] * d.label(i) * (d.feature(i, 0) > 0.5 ? -1 : 1);
    CHECK(edge(s, d, mixed) == doctest::Approx(expected));
    const std::vector<double> short_u{1.0};
    CHECK_THROWS_AS(edge(s, d, short_u), Error);
    CHECK_THROWS_AS(best_stump(d, short_u), Error);
}

TEST_CASE("exhaustive against brute force")
{
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t m = 2 + rep % 19;
        const std::size_t d = 1 + rep % 4;
        const auto data = oracle::random_dataset(rng, m, d, 2 + rep % 6);
        const auto u = oracle::random_vector(rng, m);
        const auto best = best_stump(data, u);
        const auto all = oracle::enumerate_stumps(data, u);
        const auto brute = oracle::brute_best_stump(data, u);
        CHECK(std::abs(best.edge - brute.edge) <= 1e-12);
        CHECK(std::abs(edge(best.stump, data, u) - best.edge) <= 1e-12);
        for (const auto& c : all)
            CHECK(best.edge >= c.edge - 1e-12);
    }
}

TEST_CASE("negation and scaling of u")
{
    std::mt19937_64 rng(32);
    for (int rep = 0; rep < 50; ++rep) {
        const auto data = oracle::random_dataset(rng, 12, 3);
        auto u = oracle::random_vector(rng, 12);
        const auto best = best_stump(data, u);

        std::vector<double> neg(u.size());
        std::vector<double> scaled(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            neg[i] = -u[i];
            scaled[i] = 4.0 * u[i];
        }
        // The flipped stump is optimal for -u.
        Stump flipped = best.stump;
        flipped.polarity = -flipped.polarity;
        const auto neg_best = best_stump(data, neg);
        CHECK(std::abs(edge(flipped, data, neg) - neg_best.edge) <= 1e-12);

        const auto scaled_best = best_stump(data, scaled);
        CHECK(std::abs(scaled_best.edge - 4.0 * best.edge) <= 1e-11);
        CHECK(std::abs(edge(best.stump, data, scaled) - scaled_best.edge) <= 1e-11);
    }
}

#include <algorithm>
#include <doctest.h>

#include <cmath>
#include <random>

#include "mdboost/core.hpp"
#include "mdboost/error.hpp"
#include "oracles.hpp"

using namespace mdboost;

namespace {

Dataset line(std::vector<double> x, std::vector<int> y)
{
    return Dataset(std::move(x), 1, std::move(y));
}

} // namespace

TEST_CASE("dataset validation")
{
    CHECK_THROWS_AS(Dataset({1.0}, 1, {1}), Error);
    CHECK_THROWS_AS(Dataset({1.0, 2.0}, 1, {1, 0}), Error);
    CHECK_THROWS_AS(Dataset({1.0, NAN}, 1, {1, -1}), Error);
    CHECK_THROWS_AS(Dataset({1.0, 2.0, 3.0}, 1, {1, -1}), Error);
    CHECK_THROWS_AS(Dataset({1.0, 2.0}, 0, {1, -1}), Error);
    CHECK_THROWS_AS(Dataset({1.0, 2.0}, 1, {1, -1}, {"a", "b"}), Error);
    const Dataset ok({3.0, 1.0, 2.0}, 1, {1, -1, 1}, {"f"});
    CHECK(ok.size() == 3);
    const auto order = ok.sorted_order(0);
    CHECK(order[0] == 1);
    CHECK(order[1] == 2);
    CHECK(order[2] == 0);
}

TEST_CASE("dataset subset keeps rows and names")
{
    const Dataset d({1, 10, 2, 20, 3, 30}, 2, {1, -1, 1}, {"a", "b"});
    const std::vector<std::size_t> idx{2, 0};
    const auto s = d.subset(idx);
    CHECK(s.size() == 2);
    CHECK(s.feature(0, 1) == 30);
    CHECK(s.label(1) == 1);
    CHECK(s.feature_names() == d.feature_names());
}

TEST_CASE("stump predicts with strict inequality")
{
    const Stump s{0, 0.5, 1};
    const double below[] = {0.5};
    const double above[] = {0.6};
    CHECK(s.predict(below) == -1);
    CHECK(s.predict(above) == 1);
    const Stump flipped{0, 0.5, -1};
    CHECK(flipped.predict(above) == -1);
}

TEST_CASE("margin_vector")
{
    const auto d = line({0.0, 1.0}, {-1, 1});
    SUBCASE("perfect stump gives D everywhere")
    {
        Ensemble e{{{3.0, Stump{0, 0.5, 1}}}, 3.0};
        const auto rho = margin_vector(e, d);
        CHECK(rho.values == std::vector<double>{3.0, 3.0});
    }
    SUBCASE("one error flips the sign")
    {
        const auto d2 = line({0.0, 1.0}, {1, 1});
        Ensemble e{{{2.0, Stump{0, 0.5, 1}}}, 2.0};
        CHECK(margin_vector(e, d2).values == std::vector<double>{-2.0, 2.0});
    }
    SUBCASE("empty ensemble")
    {
        CHECK_THROWS_WITH_AS(margin_vector(Ensemble{}, d), "no weak classifiers", Error);
    }
    SUBCASE("matches scalar loop")
    {
        std::mt19937_64 rng(3);
        const auto data = oracle::random_dataset(rng, 3, 2);
        Ensemble e{{{1.0, Stump{0, 2.5, 1}}, {2.0, Stump{1, 1.5, -1}}}, 3.0};
        const auto rho = margin_vector(e, data);
        const auto expected = oracle::loop_margins(e, data);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(rho.values[i] == doctest::Approx(expected[i]).epsilon(1e-15));
            CHECK(std::abs(rho.values[i]) <= 3.0);
        }
    }
}

TEST_CASE("scatter operator construction")
{
    CHECK_THROWS_AS(ScatterOperator(1, 0.1), Error);
    CHECK_THROWS_AS(ScatterOperator(3, -1.0), Error);
    CHECK_THROWS_AS(ScatterOperator(3, NAN), Error);
    const ScatterOperator op(3, 0.0);
    const std::vector<double> v{1, 2, 3};
    CHECK_THROWS_WITH_AS(scatter_solve(op, v), doctest::Contains("singular operator"), Error);
}

TEST_CASE("scatter_apply")
{
    SUBCASE("constant vectors map to delta")
    {
        for (std::size_t m : {2u, 7u, 100u}) {
            const ScatterOperator op(m, 0.25);
            const std::vector<double> ones(m, 1.0);
            for (double x : scatter_apply(op, ones))
                CHECK(x == doctest::Approx(0.25).epsilon(1e-14));
        }
    }
    SUBCASE("printed 3x3 matrix")
    {
        const ScatterOperator op(3, 0.0);
        const std::vector<double> e1{1, 0, 0};
        const auto out = scatter_apply(op, e1);
        CHECK(out[0] == doctest::Approx(1.0));
        CHECK(out[1] == doctest::Approx(-0.5));
        CHECK(out[2] == doctest::Approx(-0.5));
    }
    SUBCASE("dense oracle and linearity")
    {
        std::mt19937_64 rng(11);
        const ScatterOperator op(10, 1e-3);
        const auto dense = oracle::dense_scatter(10, 1e-3);
        for (int rep = 0; rep < 20; ++rep) {
            const auto v = oracle::random_vector(rng, 10);
            const auto w = oracle::random_vector(rng, 10);
            const auto got = scatter_apply(op, v);
            const auto want = oracle::matvec(dense, v);
            for (std::size_t i = 0; i < 10; ++i)
                CHECK(std::abs(got[i] - want[i]) <= 1e-12);
            std::vector<double> combo(10);
            for (std::size_t i = 0; i < 10; ++i)
                combo[i] = 2.0 * v[i] - 3.0 * w[i];
            const auto lhs = scatter_apply(op, combo);
            const auto aw = scatter_apply(op, w);
            for (std::size_t i = 0; i < 10; ++i)
                CHECK(std::abs(lhs[i] - (2.0 * got[i] - 3.0 * aw[i])) <= 1e-12);
            double quad = 0.0;
            double norm = 0.0;
            for (std::size_t i = 0; i < 10; ++i) {
                quad += v[i] * got[i];
                norm += v[i] * v[i];
            }
            CHECK(quad >= 1e-3 * norm - 1e-14);
        }
    }
    SUBCASE("length mismatch")
    {
        const std::vector<double> v{1, 2};
        CHECK_THROWS_AS(scatter_apply(ScatterOperator(3, 0.1), v), Error);
    }
}

TEST_CASE("scatter_solve")
{
    SUBCASE("delta times ones solves to ones")
    {
        const ScatterOperator op(5, 0.1);
        const std::vector<double> v(5, 0.1);
        for (double x : scatter_solve(op, v))
            CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("3x3 direct solve")
    {
        const ScatterOperator op(3, 0.1);
        const std::vector<double> e1{1, 0, 0};
        const auto got = scatter_solve(op, e1);
        const auto want = oracle::solve_dense(oracle::dense_scatter(3, 0.1), e1);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
    SUBCASE("round trip")
    {
        std::mt19937_64 rng(5);
        for (std::size_t m : {2u, 5u, 100u})
            for (double delta : {1e-6, 0.1}) {
                const ScatterOperator op(m, delta);
                // solve(apply(v)) recovers the mean through delta, so it
                // loses about cond * eps = (1 + 1/delta) * 2^-52.
                const double fwd_tol = std::max(1e-10, 4.0 * (1.0 + 1.0 / delta) * 0x1p-52);
                for (int rep = 0; rep < 10; ++rep) {
                    const auto v = oracle::random_vector(rng, m);
                    const auto back = scatter_apply(op, scatter_solve(op, v));
                    const auto fwd = scatter_solve(op, scatter_apply(op, v));
                    for (std::size_t i = 0; i < m; ++i) {
                        CHECK(std::abs(back[i] - v[i]) <= 1e-10);
                        CHECK(std::abs(fwd[i] - v[i]) <= fwd_tol);
                    }
                }
            }
    }
}

TEST_CASE("primal_objective")
{
    SUBCASE("constant margins")
    {
        const ScatterOperator op(4, 0.1);
        const std::vector<double> rho(4, 2.0);
        CHECK(primal_objective(op, rho) == doctest::Approx(0.05 * 4.0 * 4.0 - 8.0));
        const std::vector<double> zero(4, 0.0);
        CHECK(primal_objective(op, zero) == 0.0);
    }
    SUBCASE("pairwise oracle")
    {
        std::mt19937_64 rng(9);
        for (std::size_t m : {2u, 6u, 50u}) {
            const ScatterOperator op(m, 0.01);
            for (int rep = 0; rep < 10; ++rep) {
                const auto rho = oracle::random_vector(rng, m, -3.0, 3.0);
                const double want = oracle::pairwise_objective(rho, 0.01);
                CHECK(std::abs(primal_objective(op, rho) - want) <= 1e-10 * (1.0 + std::abs(want)));
            }
        }
    }
    SUBCASE("pairwise identity sum_{i>j} (ri - rj)^2 = M sum r^2 - (sum r)^2")
    {
        std::mt19937_64 rng(10);
        const auto rho = oracle::random_vector(rng, 17);
        double pairs = 0.0;
        double sq = 0.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j)
                pairs += (rho[i] - rho[j]) * (rho[i] - rho[j]);
            sq += rho[i] * rho[i];
            sum += rho[i];
        }
        CHECK(pairs == doctest::Approx(17.0 * sq - sum * sum).epsilon(1e-12));
    }
}

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mdboost/error.hpp"
#include "mdboost/qp.hpp"
#include "oracles.hpp"

using namespace mdboost;

namespace {

std::vector<double> random_column(std::mt19937_64& rng, std::size_t m)
{
    std::bernoulli_distribution coin(0.5);
    std::vector<double> c(m);
    for (double& x : c)
        x = coin(rng) ? 1.0 : -1.0;
    return c;
}

struct Instance {
    RestrictedProblem problem;
    std::vector<std::vector<double>> columns;
};

Instance random_instance(std::mt19937_64& rng, std::size_t m, std::size_t n, double delta, double budget)
{
    Instance out{RestrictedProblem(ScatterOperator(m, delta), budget), {}};
    while (out.columns.size() < n) {
        auto c = random_column(rng, m);
        if (out.problem.find_column(c))
            continue;
        out.problem.add_column(c);
        out.columns.push_back(c);
    }
    return out;
}

} // namespace

TEST_CASE("restricted problem bookkeeping")
{
    RestrictedProblem p(ScatterOperator(3, 0.1), 2.0);
    const std::vector<double> a{1, -1, 1};
    const std::vector<double> b{1, 1, 1};
    p.add_column(a);
    p.add_column(b);
    CHECK(p.gram(0, 1) == 1.0);
    CHECK(p.gram(1, 0) == 1.0);
    CHECK(p.gram(1, 1) == 3.0);
    CHECK(p.column_sum(0) == 1.0);
    CHECK(p.find_column(b) == std::optional<std::size_t>(1));
    const std::vector<double> bad{1, 0.5, 1};
    CHECK_THROWS_AS(p.add_column(bad), Error);
    const std::vector<double> short_col{1, 1};
    CHECK_THROWS_AS(p.add_column(short_col), Error);
    CHECK_THROWS_AS(RestrictedProblem(ScatterOperator(3, 0.1), 0.0), Error);
    RestrictedProblem empty(ScatterOperator(3, 0.1), 1.0);
    CHECK_THROWS_AS(solve_restricted(empty), Error);
}

TEST_CASE("single column is forced")
{
    RestrictedProblem p(ScatterOperator(4, 0.1), 2.0);
    const std::vector<double> all_correct(4, 1.0);
    p.add_column(all_correct);
    const auto sol = solve_restricted(p);
    REQUIRE(sol.w.size() == 1);
    CHECK(sol.w[0] == doctest::Approx(2.0));
    for (double r : sol.rho.values)
        CHECK(r == doctest::Approx(2.0));
    CHECK(sol.objective == doctest::Approx(-7.2));

    const auto dual = recover_dual(p, sol);
    for (double u : dual.u)
        CHECK(u == doctest::Approx(1.0 - 0.1 * 2.0));
    CHECK(dual.r == doctest::Approx(4.0 * (1.0 - 0.2)));
}

TEST_CASE("zero margins give unit dual")
{
    RestrictedProblem p(ScatterOperator(3, 0.1), 1.0);
    const std::vector<double> a{1, -1, 1};
    const std::vector<double> b{1, 1, 1};
    p.add_column(a);
    p.add_column(b);
    PrimalSolution zero;
    zero.w = {0.0, 0.0};
    zero.rho.values = {0.0, 0.0, 0.0};
    const auto dual = recover_dual(p, zero);
    CHECK(dual.u == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(dual.r == 3.0);
    CHECK(dual.slacks == std::vector<double>{2.0, 0.0});
}

TEST_CASE("project_simplex")
{
    const std::vector<double> on{0.2, 0.5, 0.3};
    const auto same = project_simplex(on, 1.0);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(same[j] == doctest::Approx(on[j]).epsilon(1e-15));
    const std::vector<double> dominant{10, 0, 0};
    CHECK(project_simplex(dominant, 1.0) == std::vector<double>{1.0, 0.0, 0.0});
    const std::vector<double> bad{1.0};
    CHECK_THROWS_AS(project_simplex(bad, 0.0), Error);

    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const auto v = oracle::random_vector(rng, 5, -2.0, 4.0);
        const auto w = project_simplex(v, 3.0);
        const auto want = oracle::projection_bisection(v, 3.0);
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(3.0).epsilon(1e-12));
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(w[j] >= 0.0);
            CHECK(std::abs(w[j] - want[j]) <= 1e-9);
        }
    }
}

TEST_CASE("projection beats a grid of feasible points")
{
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 10; ++rep) {
        const auto v = oracle::random_vector(rng, 3, -1.0, 2.0);
        const auto w = project_simplex(v, 1.0);
        auto dist = [&](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t j = 0; j < 3; ++j)
                s += (x[j] - v[j]) * (x[j] - v[j]);
            return s;
        };
        CHECK(dist(w) <= oracle::simplex_grid_min(3, 1.0, 1000, dist) + 1e-12);
    }
}

TEST_CASE("solver matches grid search and satisfies duality")
{
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t m = 3 + rep % 4;
        const std::size_t n = 1 + rep % 3;
        const double budget = 0.5 + rep % 5;
        const double delta = rep % 2 ? 0.1 : 1e-6;
        auto inst = random_instance(rng, m, n, delta, budget);
        const auto sol = solve_restricted(inst.problem);

        auto f = [&](std::span<const double> w) { return oracle::restricted_objective(inst.columns, w, delta); };
        const double grid = oracle::simplex_grid_min(n, budget, 1000, f);
        CHECK(sol.objective <= grid + 1e-9);
        CHECK(std::abs(sol.objective - grid) <= 1e-4);
        CHECK(std::abs(sol.objective - f(sol.w)) <= 1e-10 * (1.0 + std::abs(sol.objective)));
        CHECK(std::accumulate(sol.w.begin(), sol.w.end(), 0.0) == doctest::Approx(budget).epsilon(1e-12));
        for (double w : sol.w)
            CHECK(w >= 0.0);

        const auto dual = recover_dual(inst.problem, sol);
        const double gap = std::abs(dual_objective(inst.problem, dual) - sol.objective);
        CHECK(gap <= 1e-6 * (1.0 + std::abs(sol.objective)));
        for (std::size_t j = 0; j < n; ++j) {
            double e = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                e += dual.u[i] * inst.columns[j][i];
            CHECK(std::abs(dual.slacks[j] - (dual.r - e)) <= 1e-12 * (1.0 + std::abs(dual.r)));
            CHECK(dual.slacks[j] >= -1e-7);
            CHECK(std::abs(sol.w[j] * dual.slacks[j]) <= 1e-6);
        }

        std::vector<double> one_minus_u(m);
        for (std::size_t i = 0; i < m; ++i)
            one_minus_u[i] = 1.0 - dual.u[i];
        const auto rho = scatter_solve(inst.problem.scatter(), one_minus_u);
        for (std::size_t i = 0; i < m; ++i)
            CHECK(std::abs(rho[i] - sol.rho.values[i]) <= 1e-6 * (1.0 + std::abs(sol.rho.values[i])));
    }
}

TEST_CASE("warm and cold starts agree, adding columns never hurts")
{
    std::mt19937_64 rng(44);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t m = 30;
        RestrictedProblem p(ScatterOperator(m, 1e-6), 8.0);
        std::vector<double> w;
        double previous = INFINITY;
        for (int col = 0; col < 12; ++col) {
            auto c = random_column(rng, m);
            if (p.find_column(c))
                continue;
            p.add_column(c);
            const auto warm = solve_restricted(p, std::span<const double>(w));
            const auto cold = solve_restricted(p);
            CHECK(std::abs(warm.objective - cold.objective) <= 1e-7 * (1.0 + std::abs(cold.objective)));
            CHECK(warm.objective <= previous + 1e-9 * (1.0 + std::abs(previous)));
            CHECK(warm.projected_gradient_norm <= 1e-8 * std::max(1.0, std::abs(warm.objective)));
            previous = warm.objective;
            w = warm.w;
        }
    }
}

TEST_CASE("column and its negation")
{
    RestrictedProblem p(ScatterOperator(8, 1e-6), 10.0);
    const std::vector<double> c{1, 1, 1, 1, 1, 1, -1, 1};
    std::vector<double> neg(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        neg[i] = -c[i];
    p.add_column(c);
    const auto first = solve_restricted(p);
    p.add_column(neg);
    const auto second = solve_restricted(p, std::span<const double>(first.w));
    auto f = [&](std::span<const double> w) { return oracle::restricted_objective({c, neg}, w, 1e-6); };
    CHECK(second.objective < first.objective);
    CHECK(std::abs(second.objective - oracle::simplex_grid_min(2, 10.0, 10000, f)) <= 1e-4);
}

TEST_CASE("warm start of wrong length")
{
    RestrictedProblem p(ScatterOperator(3, 0.1), 1.0);
    const std::vector<double> a{1, -1, 1};
    p.add_column(a);
    const std::vector<double> bad{0.5, 0.5, 0.5};
    CHECK_THROWS_AS(solve_restricted(p, std::span<const double>(bad)), Error);
}

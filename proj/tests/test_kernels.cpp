#include <doctest.h>

#include <random>

#include "mdboost/kernels.hpp"
#include "oracles.hpp"

using namespace mdboost;

TEST_CASE("serial and parallel best_stump agree bit for bit")
{
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 30; ++rep) {
        const auto data = oracle::random_dataset(rng, 40 + rep, 1 + rep % 6, 3 + rep % 5);
        const auto a = oracle::random_vector(rng, data.size());
        const auto s = kernels::serial::best_stump(data, a);
        const auto p = kernels::parallel::best_stump(data, a);
        CHECK(s.stump == p.stump);
        CHECK(s.edge == p.edge);
    }
}

TEST_CASE("serial and parallel ensemble scores agree")
{
    std::mt19937_64 rng(22);
    const auto data = oracle::random_dataset(rng, 200, 4);
    Ensemble e;
    for (std::size_t j = 0; j < 50; ++j)
        e.members.push_back({0.1 * static_cast<double>(j % 7), Stump{j % 4, 0.5 + static_cast<double>(j % 5), j % 2 ? 1 : -1}});
    CHECK(kernels::serial::ensemble_scores(e, data) == kernels::parallel::ensemble_scores(e, data));
    const Stump s{2, 2.5, -1};
    const auto out = kernels::parallel::stump_outputs(s, data);
    CHECK(out == kernels::serial::stump_outputs(s, data));
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(out[i] == s.predict(data, i));
}

TEST_CASE("tie-break order")
{
    const ScoredStump a{{0, 1.0, 1}, 0.5};
    CHECK(kernels::stump_precedes({{0, 1.0, 1}, 0.6}, a));
    CHECK(kernels::stump_precedes(a, {{1, 0.0, 1}, 0.5}));
    CHECK(kernels::stump_precedes(a, {{0, 2.0, 1}, 0.5}));
    CHECK(kernels::stump_precedes(a, {{0, 1.0, -1}, 0.5}));
    CHECK_FALSE(kernels::stump_precedes(a, a));
}

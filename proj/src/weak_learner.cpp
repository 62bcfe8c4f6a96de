#include "mdboost/weak_learner.hpp"

#include <limits>
#include <string>
#include <vector>

#include "mdboost/error.hpp"

namespace mdboost {

double below_min_threshold() noexcept { return std::numeric_limits<double>::lowest(); }
double above_max_threshold() noexcept { return std::numeric_limits<double>::max(); }

namespace {

void check_weights(const Dataset& data, std::span<const double> u)
{
    if (u.size() != data.size())
        throw Error("weight vector has length " + std::to_string(u.size()) + ", dataset has " +
                    std::to_string(data.size()) + " examples");
}

} // namespace

ScoredStump best_stump(const Dataset& data, std::span<const double> u)
{
    check_weights(data, u);
    std::vector<double> signed_weights(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        signed_weights[i] = u[i] * data.label(i);
    return kernels::parallel::best_stump(data, signed_weights);
}

double edge(const Stump& stump, const Dataset& data, std::span<const double> u)
{
    check_weights(data, u);
    if (stump.feature >= data.n_features())
        throw Error("stump feature " + std::to_string(stump.feature) + " out of range");
    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        total += u[i] * data.label(i) * stump.predict(data, i);
    return total;
}

} // namespace mdboost

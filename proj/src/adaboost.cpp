#include "mdboost/adaboost.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mdboost/error.hpp"
#include "mdboost/kernels.hpp"
#include "mdboost/weak_learner.hpp"

namespace mdboost {

void AdaBoostParams::validate() const
{
    if (t_max < 1)
        throw Error("maximum number of rounds must be at least 1");
}

double adaboost_alpha(double weighted_error)
{
    const double err = std::clamp(weighted_error, kAdaBoostErrorFloor, 1.0 - kAdaBoostErrorFloor);
    return 0.5 * std::log((1.0 - err) / err);
}

double exp_loss(std::span<const double> rho)
{
    if (rho.empty())
        return -std::numeric_limits<double>::infinity();
    const double low = *std::min_element(rho.begin(), rho.end());
    double total = 0.0;
    for (double r : rho)
        total += std::exp(low - r);
    return std::log(total) - low;
}

TrainResult train_adaboost(const Dataset& data, const AdaBoostParams& params, const IterationObserver& observer)
{
    params.validate();
    const auto clock_start = std::chrono::steady_clock::now();
    const std::size_t m = data.size();

    TrainResult result;
    result.trace.termination = Termination::max_iterations;
    std::vector<double> u(m, 1.0 / static_cast<double>(m));
    std::vector<double> rho(m, 0.0);
    double alpha_sum = 0.0;

    for (std::size_t round = 1; round <= params.t_max; ++round) {
        const ScoredStump candidate = best_stump(data, u);
        const auto outputs = kernels::parallel::stump_outputs(candidate.stump, data);
        double err = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (outputs[i] != data.label(i))
                err += u[i];
        if (err >= 0.5) {
            result.trace.termination = Termination::no_positive_edge;
            break;
        }

        const double alpha = adaboost_alpha(err);
        alpha_sum += alpha;
        result.ensemble.members.push_back({alpha, candidate.stump});
        for (std::size_t i = 0; i < m; ++i)
            rho[i] += alpha * data.label(i) * outputs[i];

        // u_i proportional to exp(-rho_i); equivalent to the multiplicative
        // update followed by renormalization, without accumulated drift.
        const double low = *std::min_element(rho.begin(), rho.end());
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            u[i] = std::exp(low - rho[i]);
            total += u[i];
        }
        for (double& v : u)
            v /= total;

        IterationRecord record;
        record.iteration = round;
        record.edge = candidate.edge;
        record.r = std::numeric_limits<double>::quiet_NaN();
        record.objective = exp_loss(rho);
        double mean = 0.0;
        for (double r : rho)
            mean += r / alpha_sum;
        mean /= static_cast<double>(m);
        double sq = 0.0;
        for (double r : rho)
            sq += (r / alpha_sum - mean) * (r / alpha_sum - mean);
        record.margin_mean = mean;
        record.margin_variance = sq / static_cast<double>(m - 1);
        record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
        result.trace.records.push_back(record);

        result.ensemble.weight_sum_target = alpha_sum;
        if (observer)
            observer(result.ensemble.members.size(), result.ensemble);

        if (err < kAdaBoostErrorFloor) {
            result.trace.termination = Termination::perfect_weak_learner;
            break;
        }
    }
    result.ensemble.weight_sum_target = alpha_sum;
    result.dual.u = u;
    return result;
}

} // namespace mdboost

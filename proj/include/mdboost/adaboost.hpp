#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "mdboost/core.hpp"
#include "mdboost/mdboost.hpp"

namespace mdboost {

struct AdaBoostParams {
    std::size_t t_max = 1000;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Weighted error below which a round is treated as perfect; alpha is capped
/// at 0.5 ln((1 - floor) / floor).
inline constexpr double kAdaBoostErrorFloor = 1e-10;

/// 0.5 ln((1 - err) / err), with err clamped to the error floor.
double adaboost_alpha(double weighted_error);

/// Discrete AdaBoost with stumps, reweighting (not resampling). The trace's
/// objective column holds exp_loss of the unnormalized margins.
TrainResult train_adaboost(const Dataset& data, const AdaBoostParams& params,
                           const IterationObserver& observer = {});

/// log(sum_i exp(-rho_i)), shifted by the minimum margin for stability.
double exp_loss(std::span<const double> rho);

} // namespace mdboost

#pragma once

#include <span>

#include "mdboost/core.hpp"
#include "mdboost/kernels.hpp"

namespace mdboost {

/// Exhaustive search over (feature, threshold, polarity) for the stump
/// maximizing sum_i u_i y_i h(x_i). Thresholds are midpoints between
/// consecutive distinct values plus a below-minimum and an above-maximum
/// sentinel. u may have any sign.
ScoredStump best_stump(const Dataset& data, std::span<const double> u);

/// sum_i u_i y_i h(x_i).
double edge(const Stump& stump, const Dataset& data, std::span<const double> u);

/// Threshold used for the "always polarity" sentinel stump.
double below_min_threshold() noexcept;
/// Threshold used for the "always -polarity" sentinel stump.
double above_max_threshold() noexcept;

} // namespace mdboost

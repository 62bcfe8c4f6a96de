#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::parallel; the two produce
// bit-identical results (reductions are ordered, never floating-point
// OpenMP reductions).

#include <cstddef>
#include <span>
#include <vector>

#include "mdboost/core.hpp"

namespace mdboost {

/// A stump together with its edge sum_i u_i y_i h(x_i).
struct ScoredStump {
    Stump stump;
    double edge = 0.0;
};

namespace kernels {

/// Best stump on a single feature given a_i = u_i y_i. Candidates are visited
/// in ascending threshold order, polarity +1 before -1; the first maximum wins.
ScoredStump best_stump_on_feature(const Dataset& data, std::size_t f, std::span<const double> signed_weights);

/// True if `a` beats `b` under the tie-break order: larger edge, then lower
/// feature index, then smaller threshold, then polarity +1.
bool stump_precedes(const ScoredStump& a, const ScoredStump& b) noexcept;

namespace serial {

ScoredStump best_stump(const Dataset& data, std::span<const double> signed_weights);
std::vector<double> ensemble_scores(const Ensemble& ensemble, const Dataset& data);
std::vector<double> stump_outputs(const Stump& stump, const Dataset& data);

} // namespace serial

namespace parallel {

ScoredStump best_stump(const Dataset& data, std::span<const double> signed_weights);
std::vector<double> ensemble_scores(const Ensemble& ensemble, const Dataset& data);
std::vector<double> stump_outputs(const Stump& stump, const Dataset& data);

} // namespace parallel

} // namespace kernels
} // namespace mdboost

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "mdboost/core.hpp"
#include "mdboost/qp.hpp"

namespace mdboost {

struct TrainParams {
    /// Weight budget 1^T w = D.
    double D = 10.0;
    /// Column-generation termination threshold.
    double epsilon = 1e-5;
    double delta = kDefaultDelta;
    std::size_t n_max = 1000;
    /// Unused by the solver (training is deterministic); kept so experiment
    /// records carry it.
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Termination {
    converged,
    max_iterations,
    duplicate_column,
    // AdaBoost only.
    perfect_weak_learner,
    no_positive_edge,
};

std::string_view to_string(Termination t) noexcept;

struct IterationRecord {
    std::size_t iteration = 0;
    /// Edge of the stump generated this iteration.
    double edge = 0.0;
    /// Dual r after this iteration's solve (NaN for AdaBoost).
    double r = 0.0;
    /// Restricted master objective (MDBoost) or log-sum-exp loss (AdaBoost).
    double objective = 0.0;
    double margin_mean = 0.0;
    double margin_variance = 0.0;
    /// Wall-clock since training started. Not part of any serialized output.
    double seconds = 0.0;
};

struct TrainTrace {
    std::vector<IterationRecord> records;
    Termination termination = Termination::max_iterations;
};

struct TrainResult {
    Ensemble ensemble;
    TrainTrace trace;
    /// Dual state of the last restricted solve. For AdaBoost only u is set,
    /// holding the final example distribution.
    DualState dual;
};

/// Called after each restricted solve with the current number of columns and
/// the ensemble they define.
using IterationObserver = std::function<void(std::size_t n_columns, const Ensemble&)>;

/// Column-generation MDBoost. Starts from uniform u = 1/M; each iteration
/// adds the most violated dual constraint (the best stump under u), re-solves
/// the restricted master problem and recovers (u, r). Stops when the best
/// stump's edge is below r + epsilon, when a generated stump reproduces an
/// existing column, or after n_max iterations.
TrainResult train(const Dataset& data, const TrainParams& params, const IterationObserver& observer = {});

/// sign(F(x)), with sign(0) = +1.
int predict(const Ensemble& ensemble, std::span<const double> x);
std::vector<int> predict(const Ensemble& ensemble, const Dataset& data);
double error_rate(const Ensemble& ensemble, const Dataset& data);

} // namespace mdboost

#include "mdboost/mdboost.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "mdboost/error.hpp"
#include "mdboost/kernels.hpp"
#include "mdboost/weak_learner.hpp"

namespace mdboost {

void TrainParams::validate() const
{
    if (!(D > 0.0) || !std::isfinite(D))
        throw Error("D must be positive");
    if (!(epsilon > 0.0))
        throw Error("epsilon must be positive");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw Error("delta must be positive");
    if (n_max < 1)
        throw Error("maximum number of iterations must be at least 1");
}

std::string_view to_string(Termination t) noexcept
{
    switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iterations: return "max_iterations";
    case Termination::duplicate_column: return "duplicate_column";
    case Termination::perfect_weak_learner: return "perfect_weak_learner";
    case Termination::no_positive_edge: return "no_positive_edge";
    }
    return "unknown";
}

namespace {

void margin_moments(std::span<const double> rho, double scale, double& mean, double& variance)
{
    const double m = static_cast<double>(rho.size());
    double sum = 0.0;
    for (double r : rho)
        sum += r / scale;
    mean = sum / m;
    double sq = 0.0;
    for (double r : rho)
        sq += (r / scale - mean) * (r / scale - mean);
    variance = rho.size() > 1 ? sq / (m - 1.0) : 0.0;
}

} // namespace

TrainResult train(const Dataset& data, const TrainParams& params, const IterationObserver& observer)
{
    params.validate();
    const auto clock_start = std::chrono::steady_clock::now();
    const std::size_t m = data.size();

    RestrictedProblem problem(ScatterOperator(m, params.delta), params.D);
    TrainResult result;
    result.ensemble.weight_sum_target = params.D;
    result.trace.termination = Termination::max_iterations;

    std::vector<double> u(m, 1.0 / static_cast<double>(m));
    std::vector<double> w;
    std::vector<Stump> stumps;

    for (std::size_t iteration = 1; iteration <= params.n_max; ++iteration) {
        const ScoredStump candidate = best_stump(data, u);
        if (iteration > 1 && candidate.edge < result.dual.r + params.epsilon) {
            result.trace.termination = Termination::converged;
            break;
        }

        auto column = kernels::parallel::stump_outputs(candidate.stump, data);
        for (std::size_t i = 0; i < m; ++i)
            column[i] *= data.label(i);
        if (problem.find_column(column)) {
            result.trace.termination = Termination::duplicate_column;
            break;
        }
        problem.add_column(column);
        stumps.push_back(candidate.stump);

        const PrimalSolution primal = solve_restricted(problem, std::span<const double>(w));
        result.dual = recover_dual(problem, primal);
        u = result.dual.u;
        w = primal.w;

        IterationRecord record;
        record.iteration = iteration;
        record.edge = candidate.edge;
        record.r = result.dual.r;
        record.objective = primal.objective;
        margin_moments(primal.rho.values, params.D, record.margin_mean, record.margin_variance);
        record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
        result.trace.records.push_back(record);

        if (observer) {
            Ensemble snapshot;
            snapshot.weight_sum_target = params.D;
            for (std::size_t j = 0; j < stumps.size(); ++j)
                snapshot.members.push_back({w[j], stumps[j]});
            observer(stumps.size(), snapshot);
        }
    }

    for (std::size_t j = 0; j < stumps.size(); ++j)
        result.ensemble.members.push_back({w[j], stumps[j]});
    return result;
}

namespace {

void check_dimension(const Ensemble& ensemble, std::size_t n_features)
{
    for (const auto& member : ensemble.members)
        if (member.stump.feature >= n_features)
            throw Error("ensemble uses feature " + std::to_string(member.stump.feature) + " but input has " +
                        std::to_string(n_features) + " features");
}

} // namespace

int predict(const Ensemble& ensemble, std::span<const double> x)
{
    check_dimension(ensemble, x.size());
    return ensemble.score(x) >= 0.0 ? 1 : -1;
}

std::vector<int> predict(const Ensemble& ensemble, const Dataset& data)
{
    check_dimension(ensemble, data.n_features());
    const auto scores = kernels::parallel::ensemble_scores(ensemble, data);
    std::vector<int> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        out[i] = scores[i] >= 0.0 ? 1 : -1;
    return out;
}

double error_rate(const Ensemble& ensemble, const Dataset& data)
{
    const auto predictions = predict(ensemble, data);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        wrong += predictions[i] != data.label(i);
    return static_cast<double>(wrong) / static_cast<double>(predictions.size());
}

} // namespace mdboost

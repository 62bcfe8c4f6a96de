#include "mdboost/kernels.hpp"

#include <limits>

#include "mdboost/weak_learner.hpp"

namespace mdboost::kernels {

bool stump_precedes(const ScoredStump& a, const ScoredStump& b) noexcept
{
    if (a.edge != b.edge)
        return a.edge > b.edge;
    if (a.stump.feature != b.stump.feature)
        return a.stump.feature < b.stump.feature;
    if (a.stump.threshold != b.stump.threshold)
        return a.stump.threshold < b.stump.threshold;
    return a.stump.polarity > b.stump.polarity;
}

ScoredStump best_stump_on_feature(const Dataset& data, std::size_t f, std::span<const double> signed_weights)
{
    const auto order = data.sorted_order(f);
    const std::size_t m = order.size();

    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        total += signed_weights[i];

    // Predicting +1 above the threshold scores total - 2 * (mass at or below).
    ScoredStump best{{f, below_min_threshold(), 1}, total};
    auto consider = [&](double threshold, double below) {
        const double e = total - 2.0 * below;
        if (e > best.edge)
            best = {{f, threshold, 1}, e};
        if (-e > best.edge)
            best = {{f, threshold, -1}, -e};
    };
    // Polarity -1 for the below-min sentinel.
    if (-total > best.edge)
        best = {{f, below_min_threshold(), -1}, -total};

    double below = 0.0;
    std::size_t k = 0;
    while (k < m) {
        const double value = data.feature(order[k], f);
        while (k < m && data.feature(order[k], f) == value) {
            below += signed_weights[order[k]];
            ++k;
        }
        if (k < m) {
            const double next = data.feature(order[k], f);
            consider(value + (next - value) / 2.0, below);
        }
    }
    consider(above_max_threshold(), below);
    return best;
}

namespace serial {

ScoredStump best_stump(const Dataset& data, std::span<const double> signed_weights)
{
    ScoredStump best = best_stump_on_feature(data, 0, signed_weights);
    for (std::size_t f = 1; f < data.n_features(); ++f) {
        ScoredStump candidate = best_stump_on_feature(data, f, signed_weights);
        if (stump_precedes(candidate, best))
            best = candidate;
    }
    return best;
}

std::vector<double> ensemble_scores(const Ensemble& ensemble, const Dataset& data)
{
    std::vector<double> scores(data.size(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i)
        scores[i] = ensemble.score(data.row(i));
    return scores;
}

std::vector<double> stump_outputs(const Stump& stump, const Dataset& data)
{
    std::vector<double> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out[i] = stump.predict(data, i);
    return out;
}

} // namespace serial

namespace parallel {

ScoredStump best_stump(const Dataset& data, std::span<const double> signed_weights)
{
    const auto d = static_cast<std::ptrdiff_t>(data.n_features());
    std::vector<ScoredStump> per_feature(data.n_features());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t f = 0; f < d; ++f)
        per_feature[static_cast<std::size_t>(f)] =
            best_stump_on_feature(data, static_cast<std::size_t>(f), signed_weights);

    // Ordered reduction: identical to the serial scan for any schedule.
    ScoredStump best = per_feature.front();
    for (std::size_t f = 1; f < per_feature.size(); ++f)
        if (stump_precedes(per_feature[f], best))
            best = per_feature[f];
    return best;
}

std::vector<double> ensemble_scores(const Ensemble& ensemble, const Dataset& data)
{
    const auto m = static_cast<std::ptrdiff_t>(data.size());
    std::vector<double> scores(data.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i)
        scores[static_cast<std::size_t>(i)] = ensemble.score(data.row(static_cast<std::size_t>(i)));
    return scores;
}

std::vector<double> stump_outputs(const Stump& stump, const Dataset& data)
{
    const auto m = static_cast<std::ptrdiff_t>(data.size());
    std::vector<double> out(data.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i)
        out[static_cast<std::size_t>(i)] = stump.predict(data, static_cast<std::size_t>(i));
    return out;
}

} // namespace parallel
} // namespace mdboost::kernels

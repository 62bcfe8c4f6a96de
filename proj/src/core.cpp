#include "mdboost/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mdboost/error.hpp"
#include "mdboost/kernels.hpp"

namespace mdboost {

Dataset::Dataset(std::vector<double> features, std::size_t n_features, std::vector<int> labels,
                 std::vector<std::string> feature_names)
    : features_(std::move(features)), n_features_(n_features), labels_(std::move(labels)),
      names_(std::move(feature_names))
{
    if (n_features_ == 0)
        throw Error("dataset needs at least one feature");
    if (labels_.size() < 2)
        throw Error("dataset needs at least two examples");
    if (features_.size() != labels_.size() * n_features_)
        throw Error("feature matrix has " + std::to_string(features_.size()) + " entries, expected " +
                    std::to_string(labels_.size() * n_features_));
    if (!names_.empty() && names_.size() != n_features_)
        throw Error("expected " + std::to_string(n_features_) + " feature names, got " +
                    std::to_string(names_.size()));
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] != -1 && labels_[i] != 1)
            throw Error("label of example " + std::to_string(i) + " is " + std::to_string(labels_[i]) +
                        ", expected -1 or +1");
    for (std::size_t k = 0; k < features_.size(); ++k)
        if (std::isnan(features_[k]))
            throw Error("NaN feature value at example " + std::to_string(k / n_features_) + ", feature " +
                        std::to_string(k % n_features_));

    const std::size_t m = labels_.size();
    order_.resize(m * n_features_);
    for (std::size_t f = 0; f < n_features_; ++f) {
        auto first = order_.begin() + static_cast<std::ptrdiff_t>(f * m);
        std::iota(first, first + static_cast<std::ptrdiff_t>(m), std::uint32_t{0});
        std::stable_sort(first, first + static_cast<std::ptrdiff_t>(m),
                         [&](std::uint32_t a, std::uint32_t b) { return feature(a, f) < feature(b, f); });
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const
{
    std::vector<double> features;
    std::vector<int> labels;
    features.reserve(indices.size() * n_features_);
    labels.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size())
            throw Error("subset index " + std::to_string(i) + " out of range");
        auto r = row(i);
        features.insert(features.end(), r.begin(), r.end());
        labels.push_back(labels_[i]);
    }
    return Dataset(std::move(features), n_features_, std::move(labels), names_);
}

double Ensemble::weight_sum() const noexcept
{
    double total = 0.0;
    for (const auto& m : members)
        total += m.weight;
    return total;
}

double Ensemble::score(std::span<const double> x) const noexcept
{
    double total = 0.0;
    for (const auto& m : members)
        total += m.weight * m.stump.predict(x);
    return total;
}

ScatterOperator::ScatterOperator(std::size_t m, double delta) : m_(m), delta_(delta)
{
    if (m < 2)
        throw Error("scatter operator needs M >= 2");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw Error("scatter operator needs a finite delta >= 0");
    coupling_ = 1.0 / static_cast<double>(m - 1);
    diag_ = static_cast<double>(m) * coupling_ + delta;
}

MarginVector margin_vector(const Ensemble& ensemble, const Dataset& data)
{
    if (ensemble.members.empty())
        throw Error("no weak classifiers");
    MarginVector rho{kernels::parallel::ensemble_scores(ensemble, data)};
    for (std::size_t i = 0; i < rho.values.size(); ++i)
        rho.values[i] *= data.label(i);
    return rho;
}

namespace {

void check_length(const ScatterOperator& op, std::span<const double> v)
{
    if (v.size() != op.size())
        throw Error("vector length " + std::to_string(v.size()) + " does not match operator size " +
                    std::to_string(op.size()));
}

long double mean_of(std::span<const double> v)
{
    long double sum = 0.0L;
    for (double x : v)
        sum += x;
    return sum / static_cast<long double>(v.size());
}

// out_i = base + offsets_i, rounded so that the rounding errors are as
// tightly clustered as possible. A common error along 1 is harmless (A maps 1
// to 0), while independent errors of half an ulp each would survive into the
// centered part. Each entry is moved by at most one ulp.
std::vector<double> clustered_sum(double base, std::span<const double> offsets)
{
    const std::size_t m = offsets.size();
    std::vector<double> out(m);
    std::vector<std::pair<double, std::size_t>> errors(m);
    for (std::size_t i = 0; i < m; ++i) {
        // Two-sum: err is exactly (base + offsets_i) - out_i.
        out[i] = base + offsets[i];
        const double bv = out[i] - base;
        const double err = (base - (out[i] - bv)) + (offsets[i] - bv);
        errors[i] = {-err, i};
    }
    if (m < 2 || out[0] == 0.0 || !std::isfinite(out[0]))
        return out;
    const int exponent = std::ilogb(out[0]);
    const double ulp = std::ldexp(1.0, exponent - std::numeric_limits<double>::digits + 1);
    for (double x : out)
        if (x == 0.0 || std::ilogb(x) != exponent)
            return out;

    // Errors lie on a circle of circumference ulp. Cut it at the widest gap
    // and lift everything below the cut by one ulp.
    std::sort(errors.begin(), errors.end());
    double widest = errors.front().first + ulp - errors.back().first;
    std::size_t cut = m;
    for (std::size_t k = 1; k < m; ++k) {
        const double gap = errors[k].first - errors[k - 1].first;
        if (gap > widest) {
            widest = gap;
            cut = k;
        }
    }
    if (cut == m)
        return out;
    std::vector<double> lifted(out);
    for (std::size_t k = 0; k < cut; ++k) {
        const std::size_t i = errors[k].second;
        lifted[i] = out[i] + ulp;
        if (std::ilogb(lifted[i]) != exponent)
            return out;
    }
    return lifted;
}

} // namespace

// (A + delta I) v = M/(M-1) (v - mean) + delta v. Centering first keeps the
// large component along 1 from cancelling when delta is tiny.
std::vector<double> scatter_apply(const ScatterOperator& op, std::span<const double> v)
{
    check_length(op, v);
    const long double mean = mean_of(v);
    const long double m = static_cast<long double>(v.size());
    const long double scale = m / (m - 1.0L);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = static_cast<double>(scale * (v[i] - mean) + static_cast<long double>(op.delta()) * v[i]);
    return out;
}

// Sherman-Morrison: (c I - b 11^T)^{-1} = I/c + b/(c (c - b M)) 11^T, and
// c - b M = delta. Split as (v - mean)/c + mean/delta.
std::vector<double> scatter_solve(const ScatterOperator& op, std::span<const double> v)
{
    check_length(op, v);
    if (!(op.delta() > 0.0))
        throw Error("singular operator: scatter_solve needs delta > 0");
    const long double mean = mean_of(v);
    const long double m = static_cast<long double>(v.size());
    const long double c = m / (m - 1.0L) + op.delta();
    std::vector<double> centered(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        centered[i] = static_cast<double>((v[i] - mean) / c);
    return clustered_sum(static_cast<double>(mean / op.delta()), centered);
}

double primal_objective(const ScatterOperator& op, std::span<const double> rho)
{
    check_length(op, rho);
    const double m = static_cast<double>(rho.size());
    const double sum = std::accumulate(rho.begin(), rho.end(), 0.0);
    const double mean = sum / m;
    double centered = 0.0;
    double sum_sq = 0.0;
    for (double r : rho) {
        centered += (r - mean) * (r - mean);
        sum_sq += r * r;
    }
    // rho^T A rho = M/(M-1) sum_i (rho_i - mean)^2; the centered form avoids
    // cancelling c |rho|^2 against b (1^T rho)^2 when the margins are similar.
    const double quad = m * op.coupling() * centered + op.delta() * sum_sq;
    return 0.5 * quad - sum;
}

} // namespace mdboost

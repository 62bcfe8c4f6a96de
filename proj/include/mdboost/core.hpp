#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdboost {

inline constexpr double kDefaultDelta = 1e-6;

/// Labelled training data: an M x d feature matrix (row per example) and
/// labels in {-1, +1}. Immutable after construction. A per-feature sort order
/// is computed once so the stump search does not re-sort on every call.
class Dataset {
public:
    Dataset(std::vector<double> features, std::size_t n_features, std::vector<int> labels,
            std::vector<std::string> feature_names = {});

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t n_features() const noexcept { return n_features_; }

    double feature(std::size_t example, std::size_t f) const noexcept
    {
        return features_[example * n_features_ + f];
    }
    std::span<const double> row(std::size_t example) const noexcept
    {
        return {features_.data() + example * n_features_, n_features_};
    }
    int label(std::size_t example) const noexcept { return labels_[example]; }
    std::span<const int> labels() const noexcept { return labels_; }
    std::span<const double> raw_features() const noexcept { return features_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }

    /// Example indices ordered by ascending value of feature `f`.
    std::span<const std::uint32_t> sorted_order(std::size_t f) const noexcept
    {
        return {order_.data() + f * size(), size()};
    }

    /// Rows `indices` (in that order) as a new dataset.
    Dataset subset(std::span<const std::size_t> indices) const;

private:
    std::vector<double> features_;
    std::size_t n_features_;
    std::vector<int> labels_;
    std::vector<std::string> names_;
    std::vector<std::uint32_t> order_;
};

/// Decision stump: polarity if x[feature] > threshold, otherwise -polarity.
struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    int polarity = 1;

    int predict(std::span<const double> x) const noexcept
    {
        return x[feature] > threshold ? polarity : -polarity;
    }
    int predict(const Dataset& data, std::size_t example) const noexcept
    {
        return data.feature(example, feature) > threshold ? polarity : -polarity;
    }

    friend bool operator==(const Stump&, const Stump&) = default;
};

struct WeightedStump {
    double weight = 0.0;
    Stump stump;

    friend bool operator==(const WeightedStump&, const WeightedStump&) = default;
};

/// Strong classifier F(x) = sum_j w_j h_j(x).
struct Ensemble {
    std::vector<WeightedStump> members;
    /// Weight budget D the ensemble was trained for.
    double weight_sum_target = 0.0;

    double weight_sum() const noexcept;
    double score(std::span<const double> x) const noexcept;

    friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

/// Unnormalized margins rho_i = y_i F(x_i).
struct MarginVector {
    std::vector<double> values;
};

/// The pairwise-scatter matrix A (unit diagonal, -1/(M-1) elsewhere) plus
/// delta * I, held as its two scalars. A is identity-plus-rank-one, so both the
/// product and the inverse are O(M).
class ScatterOperator {
public:
    ScatterOperator(std::size_t m, double delta);

    std::size_t size() const noexcept { return m_; }
    double delta() const noexcept { return delta_; }
    /// Diagonal of A + delta I.
    double diagonal() const noexcept { return diag_; }
    /// Magnitude of the off-diagonal entries, 1/(M-1).
    double coupling() const noexcept { return coupling_; }

private:
    std::size_t m_;
    double delta_;
    double diag_;
    double coupling_;
};

MarginVector margin_vector(const Ensemble& ensemble, const Dataset& data);

/// (A + delta I) v.
std::vector<double> scatter_apply(const ScatterOperator& op, std::span<const double> v);

/// (A + delta I)^{-1} v. Requires delta > 0.
std::vector<double> scatter_solve(const ScatterOperator& op, std::span<const double> v);

/// 0.5 rho^T (A + delta I) rho - 1^T rho.
double primal_objective(const ScatterOperator& op, std::span<const double> rho);

} // namespace mdboost

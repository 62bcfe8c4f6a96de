#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mdboost/core.hpp"

namespace mdboost {

/// Restricted master problem over the generated columns:
///
///   min_w  0.5 (Bw)^T (A + delta I) (Bw) - 1^T Bw   s.t.  w >= 0, 1^T w = D
///
/// where column j of B holds y_i h_j(x_i). The Gram matrix B^T B and the
/// column sums are maintained as columns arrive, so the solver works in the
/// N-dimensional weight space and never touches the M x M operator.
class RestrictedProblem {
public:
    RestrictedProblem(ScatterOperator scatter, double budget);

    /// Appends a column. Entries must all be -1 or +1.
    void add_column(std::span<const double> signed_column);

    /// Index of a stored column equal to `signed_column`, if any.
    std::optional<std::size_t> find_column(std::span<const double> signed_column) const;

    std::size_t n_examples() const noexcept { return scatter_.size(); }
    std::size_t n_columns() const noexcept { return n_columns_; }
    double budget() const noexcept { return budget_; }
    const ScatterOperator& scatter() const noexcept { return scatter_; }

    std::span<const double> column(std::size_t j) const noexcept
    {
        return {columns_.data() + j * n_examples(), n_examples()};
    }
    double gram(std::size_t i, std::size_t j) const noexcept { return gram_[i][j]; }
    double column_sum(std::size_t j) const noexcept { return sums_[j]; }

    /// B w.
    std::vector<double> margins(std::span<const double> w) const;
    /// B^T u, the edge of every column.
    std::vector<double> edges(std::span<const double> u) const;

private:
    ScatterOperator scatter_;
    double budget_;
    std::size_t n_columns_ = 0;
    std::vector<double> columns_;
    std::vector<std::vector<double>> gram_;
    std::vector<double> sums_;
};

struct PrimalSolution {
    std::vector<double> w;
    MarginVector rho;
    double objective = 0.0;
    /// Norm of the gradient mapping at w.
    double projected_gradient_norm = 0.0;
    std::size_t iterations = 0;
};

/// Dual variables (u, r); slacks_j = r - sum_i u_i y_i H_ij on the restricted
/// columns.
struct DualState {
    std::vector<double> u;
    double r = 0.0;
    std::vector<double> slacks;
};

struct SolverOptions {
    /// Stop when the gradient-mapping norm is below tolerance * max(1, |f|).
    double tolerance = 1e-8;
    std::size_t max_iterations = 100000;
    std::size_t power_iterations = 30;
};

/// Accelerated projected gradient with exact simplex projection, backtracking
/// on the Lipschitz estimate and restart whenever a step fails to decrease f.
/// A warm start of length N-1 is padded with a zero for the newest column.
PrimalSolution solve_restricted(const RestrictedProblem& problem,
                                std::optional<std::span<const double>> warm_start = std::nullopt,
                                const SolverOptions& options = {});

/// u = 1 - (A + delta I) rho and r = max restricted-column edge.
DualState recover_dual(const RestrictedProblem& problem, const PrimalSolution& primal);

/// -D r - 0.5 (u - 1)^T (A + delta I)^{-1} (u - 1).
double dual_objective(const RestrictedProblem& problem, const DualState& dual);

/// Euclidean projection of v onto {w >= 0, 1^T w = budget}.
std::vector<double> project_simplex(std::span<const double> v, double budget);

} // namespace mdboost

#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numerical routines.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "mdboost/core.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Explicit A + delta I.
Matrix dense_scatter(std::size_t m, double delta);
std::vector<double> matvec(const Matrix& a, std::span<const double> v);
/// Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(Matrix a, std::vector<double> b);

/// 1/(2(M-1)) sum_{i>j} (rho_i - rho_j)^2 + delta/2 |rho|^2 - sum rho.
double pairwise_objective(std::span<const double> rho, double delta);

/// rho = sum_j w_j column_j, then pairwise_objective.
double restricted_objective(const std::vector<std::vector<double>>& columns, std::span<const double> w,
                            double delta);

/// Minimum of `f` over {w >= 0, sum w = budget} for n <= 3 on a grid with
/// the given number of steps per unit budget.
double simplex_grid_min(std::size_t n, double budget, std::size_t steps,
                        const std::function<double(std::span<const double>)>& f);

/// Projection onto the scaled simplex by bisection on the shift.
std::vector<double> projection_bisection(std::span<const double> v, double budget);

struct BruteStump {
    mdboost::Stump stump;
    double edge;
};

/// Every (feature, threshold, polarity) candidate with its edge computed by a
/// direct loop, in tie-break order.
std::vector<BruteStump> enumerate_stumps(const mdboost::Dataset& data, std::span<const double> u);
BruteStump brute_best_stump(const mdboost::Dataset& data, std::span<const double> u);

/// Per-example loop for sum_j w_j h_j(x_i) y_i.
std::vector<double> loop_margins(const mdboost::Ensemble& e, const mdboost::Dataset& data);

/// R+ with ranks computed by counting (rank = #less + (#equal + 1) / 2) and the
/// zero-difference convention applied independently.
double wilcoxon_r_plus(std::span<const double> a, std::span<const double> b, std::size_t* effective_n = nullptr);
/// P(W >= c) for the signed-rank statistic over n untied ranks, by full
/// enumeration of 2^n sign patterns.
double wilcoxon_upper_tail(std::size_t n, double c);

/// Counting-based ranks per row and the chi^2_F formula.
double friedman_statistic(const std::vector<std::vector<double>>& errors, std::vector<double>* average_ranks = nullptr);

/// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// log sum exp(-rho) in long double without shifting.
long double exp_loss_long(std::span<const double> rho);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);

/// Random dataset with small integer-valued features (so ties occur).
mdboost::Dataset random_dataset(std::mt19937_64& rng, std::size_t m, std::size_t d, int levels = 6);
std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0);

} // namespace oracle

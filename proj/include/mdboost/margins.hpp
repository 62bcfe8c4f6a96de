#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdboost/core.hpp"

namespace mdboost {

/// Distribution of normalized margins rho_i / sum_j w_j.
struct MarginReport {
    std::vector<double> normalized_margins;
    double mean = 0.0;
    /// Conventional sample variance, 1/(M-1) sum_i (rho_i - mean)^2.
    double variance = 0.0;
    /// 1/(M-1) sum_{i>j} (rho_i - rho_j)^2, which equals M * variance.
    double pairwise_variance = 0.0;
    double minimum = 0.0;
    /// False when M = 1; both variances are then reported as 0.
    bool variance_defined = true;
    /// Empirical CDF sampled at each distinct margin: (margin, fraction <= margin).
    std::vector<std::pair<double, double>> cumulative;
};

MarginReport margin_report(const Ensemble& ensemble, const Dataset& data);
/// Report for already-normalized margins.
MarginReport margin_report(std::span<const double> normalized_margins);

/// -mu + sigma^2 / 2: the log-sum-exp loss (less log M) of Gaussian margins.
double gaussian_cost_approx(double mu, double sigma_sq);

/// log of the integral over [rho1, rho2] of the Gaussian density (mu, sigma)
/// times exp(-rho), in closed form through erf.
double gaussian_cost_truncated(double mu, double sigma, double rho1, double rho2);

/// Average number of members per ensemble (with positive weight) using each
/// feature.
std::vector<double> feature_frequency(std::span<const Ensemble> ensembles, std::size_t n_features);

struct ShapeDiagnostic {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    /// |skewness| < 0.5 and |excess kurtosis| < 1.
    bool looks_gaussian = false;
};

ShapeDiagnostic shape_diagnostic(std::span<const double> values);

/// "# mean=", "# variance=", "# min=" comments, then margin,cumulative_frequency rows.
void write_margin_csv(std::ostream& out, const MarginReport& report);
/// feature_index,feature_name,frequency rows.
void write_frequency_csv(std::ostream& out, std::span<const double> frequency,
                         std::span<const std::string> feature_names);

} // namespace mdboost

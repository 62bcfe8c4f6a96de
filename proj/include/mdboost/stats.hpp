#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace mdboost::stats {

/// Mean test errors of k algorithms over N datasets (row per dataset).
struct ErrorTable {
    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> errors;

    std::size_t n_algorithms() const noexcept { return algorithms.size(); }
    std::size_t n_datasets() const noexcept { return datasets.size(); }
    std::vector<double> column(std::size_t algorithm) const;
    void validate() const;
};

/// Header row = algorithm names (first cell ignored), first column = dataset
/// names.
ErrorTable read_error_table(std::istream& in);
ErrorTable load_error_table(const std::filesystem::path& path);

/// Larger statistic is better; better <=> statistic clears the critical value.
struct TestDecision {
    double statistic = 0.0;
    double critical_value = 0.0;
    bool better = false;
    bool degenerate = false;
    /// Wilcoxon: number of differences kept after the zero-difference rule.
    std::size_t effective_n = 0;
};

/// One-tailed Wilcoxon signed-ranks test of "A has lower error than B".
/// Statistic is R+, the rank sum of d_i = b_i - a_i > 0. Zero differences
/// share their ranks evenly between R+ and R-; one is discarded when their
/// count is odd. Better when R+ >= the critical value.
TestDecision wilcoxon_signed_rank(std::span<const double> errors_a, std::span<const double> errors_b,
                                  double alpha = 0.05);

/// Smallest c with P(R+ >= c) <= alpha under the null, for n non-tied
/// differences. Exact for n <= 25; normal approximation with continuity
/// correction above.
double wilcoxon_critical_value(std::size_t n, double alpha);

struct FriedmanResult {
    double statistic = 0.0;
    std::vector<double> average_ranks;
    double critical_value = 0.0;
    bool reject = false;
};

/// Ranks algorithms per dataset (1 = lowest error, ties averaged) and
/// computes chi^2_F = 12N/(k(k+1)) [sum_j R_j^2 - k(k+1)^2/4].
FriedmanResult friedman(const ErrorTable& table, double alpha = 0.05);

/// Per-dataset ranks, row per dataset.
std::vector<std::vector<double>> rank_rows(const ErrorTable& table);

struct PairDecision {
    std::size_t algorithm = 0;
    TestDecision decision;
};

/// Critical value for comparing k - 1 algorithms against a control. For k = 4,
/// alpha = 0.05 this is 2.291, the value used in the published comparison;
/// otherwise the two-tailed Bonferroni-corrected normal quantile
/// z_{1 - alpha / (2 (k - 1))}.
double bonferroni_dunn_critical_value(std::size_t k, double alpha);

/// z_j = (R_j - R_control) / sqrt(k(k+1)/(6N)) for every j != control, with
/// ranks where larger means worse (so positive z means the control is better).
/// better <=> z > critical value.
std::vector<PairDecision> bonferroni_dunn(std::span<const double> average_ranks, std::size_t n_datasets,
                                          std::size_t control_index, double alpha = 0.05);

nlohmann::json to_json(const TestDecision& decision);

} // namespace mdboost::stats

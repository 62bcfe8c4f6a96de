#include "mdboost/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "format.hpp"
#include "mdboost/error.hpp"

namespace mdboost {

MarginReport margin_report(const Ensemble& ensemble, const Dataset& data)
{
    const double total = ensemble.weight_sum();
    if (!(total > 0.0))
        throw Error("margin report needs a positive weight sum");
    auto rho = margin_vector(ensemble, data).values;
    for (double& r : rho)
        r /= total;
    return margin_report(rho);
}

MarginReport margin_report(std::span<const double> normalized_margins)
{
    if (normalized_margins.empty())
        throw Error("margin report needs at least one margin");
    MarginReport report;
    report.normalized_margins.assign(normalized_margins.begin(), normalized_margins.end());
    const std::size_t m = normalized_margins.size();
    const double md = static_cast<double>(m);

    double sum = 0.0;
    for (double r : normalized_margins)
        sum += r;
    report.mean = sum / md;
    double sq = 0.0;
    for (double r : normalized_margins)
        sq += (r - report.mean) * (r - report.mean);
    report.variance_defined = m > 1;
    report.variance = m > 1 ? sq / (md - 1.0) : 0.0;
    // sum_{i>j} (r_i - r_j)^2 = M sum_i (r_i - mean)^2
    report.pairwise_variance = m > 1 ? md * sq / (md - 1.0) : 0.0;

    std::vector<double> sorted = report.normalized_margins;
    std::sort(sorted.begin(), sorted.end());
    report.minimum = sorted.front();
    for (std::size_t k = 0; k < m; ++k)
        if (k + 1 == m || sorted[k + 1] != sorted[k])
            report.cumulative.emplace_back(sorted[k], static_cast<double>(k + 1) / md);
    return report;
}

double gaussian_cost_approx(double mu, double sigma_sq)
{
    if (!(sigma_sq >= 0.0))
        throw Error("variance must be nonnegative");
    return -mu + 0.5 * sigma_sq;
}

double gaussian_cost_truncated(double mu, double sigma, double rho1, double rho2)
{
    if (!(sigma > 0.0))
        throw Error("sigma must be positive");
    if (!(rho1 < rho2))
        throw Error("integration range needs rho1 < rho2");
    const double scale = std::numbers::sqrt2 * sigma;
    const double shift = sigma / std::numbers::sqrt2;
    const double z1 = (rho1 - mu) / scale + shift;
    const double z2 = (rho2 - mu) / scale + shift;
    // erf(z2) - erf(z1); use the erfc form in the upper tail to keep digits.
    const double mass = z1 > 0.0 ? std::erfc(z1) - std::erfc(z2) : std::erf(z2) - std::erf(z1);
    return -std::numbers::ln2 - mu + 0.5 * sigma * sigma + std::log(mass);
}

std::vector<double> feature_frequency(std::span<const Ensemble> ensembles, std::size_t n_features)
{
    if (ensembles.empty())
        throw Error("feature frequency needs at least one ensemble");
    std::vector<double> freq(n_features, 0.0);
    for (const auto& e : ensembles)
        for (const auto& m : e.members) {
            if (!(m.weight > 0.0))
                continue;
            if (m.stump.feature >= n_features)
                throw Error("ensemble uses feature " + std::to_string(m.stump.feature) + " beyond " +
                            std::to_string(n_features) + " features");
            freq[m.stump.feature] += 1.0;
        }
    for (double& f : freq)
        f /= static_cast<double>(ensembles.size());
    return freq;
}

ShapeDiagnostic shape_diagnostic(std::span<const double> values)
{
    ShapeDiagnostic d;
    if (values.size() < 2)
        return d;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double c = v - mean;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        d.skewness = m3 / std::pow(m2, 1.5);
        d.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    d.looks_gaussian = m2 > 0.0 && std::abs(d.skewness) < 0.5 && std::abs(d.excess_kurtosis) < 1.0;
    return d;
}

void write_margin_csv(std::ostream& out, const MarginReport& report)
{
    using detail::format_double;
    out << "# mean=" << format_double(report.mean) << '\n'
        << "# variance=" << format_double(report.variance) << '\n'
        << "# pairwise_variance=" << format_double(report.pairwise_variance) << '\n'
        << "# min=" << format_double(report.minimum) << '\n'
        << "margin,cumulative_frequency\n";
    for (const auto& [margin, freq] : report.cumulative)
        out << format_double(margin) << ',' << format_double(freq) << '\n';
}

void write_frequency_csv(std::ostream& out, std::span<const double> frequency,
                         std::span<const std::string> feature_names)
{
    out << "feature_index,feature_name,frequency\n";
    for (std::size_t f = 0; f < frequency.size(); ++f) {
        const std::string name = f < feature_names.size() ? feature_names[f] : "f" + std::to_string(f);
        out << f << ',' << name << ',' << detail::format_double(frequency[f]) << '\n';
    }
}

} // namespace mdboost

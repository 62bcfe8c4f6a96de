#include "mdboost/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "csv.hpp"
#include "mdboost/error.hpp"

namespace mdboost::stats {

namespace {

// Differences closer than this are treated as ties (and as zero).
constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b)
{
    return std::abs(a - b) <= kTieTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Ascending ranks starting at 1, ties averaged.
std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t end = k + 1;
        while (end < order.size() && nearly_equal(values[order[end]], values[order[k]]))
            ++end;
        const double rank = 0.5 * static_cast<double>(k + 1 + end);
        for (std::size_t i = k; i < end; ++i)
            ranks[order[i]] = rank;
        k = end;
    }
    return ranks;
}

double normal_quantile(double p)
{
    return boost::math::quantile(boost::math::normal(), p);
}

} // namespace

std::vector<double> ErrorTable::column(std::size_t algorithm) const
{
    std::vector<double> out;
    out.reserve(errors.size());
    for (const auto& row : errors)
        out.push_back(row.at(algorithm));
    return out;
}

void ErrorTable::validate() const
{
    if (algorithms.size() < 2)
        throw Error("error table needs at least two algorithms");
    if (datasets.size() < 2)
        throw Error("error table needs at least two datasets");
    if (errors.size() != datasets.size())
        throw Error("error table has " + std::to_string(errors.size()) + " rows for " +
                    std::to_string(datasets.size()) + " datasets");
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].size() != algorithms.size())
            throw Error("error table row " + std::to_string(i + 1) + " has " + std::to_string(errors[i].size()) +
                        " entries, expected " + std::to_string(algorithms.size()));
        for (double v : errors[i])
            if (std::isnan(v))
                throw Error("error table row " + std::to_string(i + 1) + " contains NaN");
    }
}

ErrorTable read_error_table(std::istream& in)
{
    ErrorTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty() || line.front() == '#')
            continue;
        const auto fields = detail::split_fields(line);
        if (header) {
            for (std::size_t c = 1; c < fields.size(); ++c)
                table.algorithms.emplace_back(fields[c]);
            header = false;
            continue;
        }
        table.datasets.emplace_back(fields.front());
        std::vector<double> row;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const auto v = detail::parse_double(fields[c]);
            if (!v)
                throw Error("error table line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                            ": not a number: '" + std::string(fields[c]) + "'");
            row.push_back(*v);
        }
        table.errors.push_back(std::move(row));
    }
    table.validate();
    return table;
}

ErrorTable load_error_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open error table " + path.string());
    return read_error_table(in);
}

double wilcoxon_critical_value(std::size_t n, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("alpha must lie in (0, 1)");
    const std::size_t max_sum = n * (n + 1) / 2;
    if (n > 25) {
        const double nd = static_cast<double>(n);
        const double mean = nd * (nd + 1.0) / 4.0;
        const double sd = std::sqrt(nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0);
        return mean + 0.5 + normal_quantile(1.0 - alpha) * sd;
    }
    // counts[s] = number of subsets of {1..n} summing to s.
    std::vector<double> counts(max_sum + 1, 0.0);
    counts[0] = 1.0;
    for (std::size_t r = 1; r <= n; ++r)
        for (std::size_t s = max_sum; s >= r; --s)
            counts[s] += counts[s - r];
    const double total = std::ldexp(1.0, static_cast<int>(n));
    double tail = 0.0;
    std::size_t critical = max_sum + 1;
    for (std::size_t c = max_sum + 1; c-- > 0;) {
        tail += counts[c];
        if (tail / total > alpha)
            break;
        critical = c;
    }
    return static_cast<double>(critical);
}

TestDecision wilcoxon_signed_rank(std::span<const double> errors_a, std::span<const double> errors_b, double alpha)
{
    if (errors_a.size() != errors_b.size())
        throw Error("wilcoxon: error vectors differ in length");
    if (errors_a.empty())
        throw Error("wilcoxon: no datasets");

    std::vector<double> diffs;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < errors_a.size(); ++i) {
        double d = errors_b[i] - errors_a[i];
        if (nearly_equal(errors_a[i], errors_b[i]))
            d = 0.0;
        zeros += d == 0.0;
        diffs.push_back(d);
    }

    TestDecision out;
    if (zeros == diffs.size()) {
        out.degenerate = true;
        out.critical_value = wilcoxon_critical_value(0, alpha);
        return out;
    }
    if (zeros % 2 == 1)
        diffs.erase(std::find(diffs.begin(), diffs.end(), 0.0));

    std::vector<double> magnitudes(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i)
        magnitudes[i] = std::abs(diffs[i]);
    const auto ranks = average_ranks(magnitudes);
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0.0)
            out.statistic += ranks[i];
        else if (diffs[i] == 0.0)
            out.statistic += 0.5 * ranks[i];
    }
    out.effective_n = diffs.size();
    out.critical_value = wilcoxon_critical_value(out.effective_n, alpha);
    out.better = out.statistic >= out.critical_value;
    return out;
}

std::vector<std::vector<double>> rank_rows(const ErrorTable& table)
{
    std::vector<std::vector<double>> ranks;
    ranks.reserve(table.errors.size());
    for (const auto& row : table.errors)
        ranks.push_back(average_ranks(row));
    return ranks;
}

FriedmanResult friedman(const ErrorTable& table, double alpha)
{
    table.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("alpha must lie in (0, 1)");
    const std::size_t k = table.n_algorithms();
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(table.n_datasets());

    FriedmanResult out;
    out.average_ranks.assign(k, 0.0);
    for (const auto& row : rank_rows(table))
        for (std::size_t j = 0; j < k; ++j)
            out.average_ranks[j] += row[j];
    double sum_sq = 0.0;
    for (double& r : out.average_ranks) {
        r /= nd;
        sum_sq += r * r;
    }
    out.statistic = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
    const boost::math::chi_squared dist(kd - 1.0);
    out.critical_value = boost::math::quantile(boost::math::complement(dist, alpha));
    out.reject = out.statistic > out.critical_value;
    return out;
}

double bonferroni_dunn_critical_value(std::size_t k, double alpha)
{
    if (k < 2)
        throw Error("bonferroni-dunn needs at least two algorithms");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("alpha must lie in (0, 1)");
    if (k == 4 && std::abs(alpha - 0.05) < 1e-12)
        return 2.291;
    return normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(k - 1)));
}

std::vector<PairDecision> bonferroni_dunn(std::span<const double> average_ranks, std::size_t n_datasets,
                                          std::size_t control_index, double alpha)
{
    const std::size_t k = average_ranks.size();
    if (k < 2)
        throw Error("bonferroni-dunn needs at least two algorithms");
    if (n_datasets < 2)
        throw Error("bonferroni-dunn needs at least two datasets");
    if (control_index >= k)
        throw Error("control index " + std::to_string(control_index) + " out of range for " + std::to_string(k) +
                    " algorithms");
    const double kd = static_cast<double>(k);
    const double se = std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n_datasets)));
    const double critical = bonferroni_dunn_critical_value(k, alpha);

    std::vector<PairDecision> out;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == control_index)
            continue;
        PairDecision p;
        p.algorithm = j;
        p.decision.statistic = (average_ranks[j] - average_ranks[control_index]) / se;
        p.decision.critical_value = critical;
        p.decision.better = p.decision.statistic > critical;
        out.push_back(p);
    }
    return out;
}

nlohmann::json to_json(const TestDecision& decision)
{
    nlohmann::json j = {{"statistic", decision.statistic},
                        {"critical_value", decision.critical_value},
                        {"better", decision.better}};
    if (decision.degenerate)
        j["degenerate"] = true;
    if (decision.effective_n > 0)
        j["effective_n"] = decision.effective_n;
    return j;
}

} // namespace mdboost::stats

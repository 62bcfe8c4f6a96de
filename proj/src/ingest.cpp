#include "mdboost/ingest.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "csv.hpp"
#include "format.hpp"
#include "mdboost/error.hpp"

namespace mdboost {

Dataset read_csv(std::istream& in, std::vector<std::string>* warnings)
{
    std::vector<std::string> names;
    std::vector<double> features;
    std::vector<double> raw_labels;
    std::size_t width = 0;
    std::size_t line_no = 0;
    bool first = true;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty())
            continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() < 2)
            throw Error("line " + std::to_string(line_no) + ": need at least one feature and a label");

        if (first) {
            first = false;
            width = fields.size();
            bool numeric = true;
            for (auto f : fields)
                numeric = numeric && detail::parse_double(f).has_value();
            if (!numeric) {
                for (std::size_t c = 0; c + 1 < fields.size(); ++c)
                    names.emplace_back(fields[c]);
                continue;
            }
        }
        if (fields.size() != width)
            throw Error("line " + std::to_string(line_no) + ": " + std::to_string(fields.size()) +
                        " columns, expected " + std::to_string(width));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = detail::parse_double(fields[c]);
            if (!v || std::isnan(*v))
                throw Error("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                            ": not a number: '" + std::string(fields[c]) + "'");
            if (c + 1 < fields.size())
                features.push_back(*v);
            else
                raw_labels.push_back(*v);
        }
    }
    if (raw_labels.empty())
        throw Error("no data rows");

    bool has_zero = false;
    bool has_minus = false;
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
        const double v = raw_labels[i];
        if (v != -1.0 && v != 0.0 && v != 1.0)
            throw Error("example " + std::to_string(i + 1) + ": label " + detail::format_double(v) +
                        " is not one of -1, 0, +1");
        has_zero = has_zero || v == 0.0;
        has_minus = has_minus || v == -1.0;
    }
    if (has_zero && has_minus)
        throw Error("labels mix 0 and -1; use either {-1, +1} or {0, 1}");
    if (has_zero) {
        const std::string msg = "labels given as {0, 1}; mapping 0 to -1";
        if (warnings)
            warnings->push_back(msg);
        else
            std::cerr << "warning: " << msg << '\n';
    }
    std::vector<int> labels(raw_labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = raw_labels[i] > 0.0 ? 1 : -1;
    return Dataset(std::move(features), width - 1, std::move(labels), std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, std::vector<std::string>* warnings)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open dataset " + path.string());
    try {
        return read_csv(in, warnings);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void write_csv(std::ostream& out, const Dataset& data)
{
    if (!data.feature_names().empty()) {
        for (const auto& name : data.feature_names())
            out << name << ',';
        out << "label\n";
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.row(i))
            out << detail::format_double(v) << ',';
        out << data.label(i) << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& data)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    write_csv(out, data);
    if (!out)
        throw Error("failed writing " + path.string());
}

std::filesystem::path resolve_data_path(const std::filesystem::path& path)
{
    if (path.is_absolute())
        return path;
    if (const char* dir = std::getenv("MDBOOST_DATA_DIR"); dir && *dir)
        return std::filesystem::path(dir) / path;
    return path;
}

void SplitSpec::validate() const
{
    for (double f : {train_frac, val_frac, test_frac})
        if (!(f > 0.0 && f < 1.0))
            throw Error("split fractions must lie in (0, 1)");
    if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9)
        throw Error("split fractions must sum to 1");
    if (repeats < 1)
        throw Error("repeats must be at least 1");
}

namespace {

// Uniform integer in [0, n) by rejection, so no modulo bias.
std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t n)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine();
    while (x >= limit)
        x = engine();
    return x % n;
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

} // namespace

std::vector<std::size_t> permutation(std::size_t m, std::uint64_t seed, std::size_t repeat_index)
{
    std::mt19937_64 engine(seed ^ static_cast<std::uint64_t>(repeat_index));
    std::vector<std::size_t> p(m);
    for (std::size_t i = 0; i < m; ++i)
        p[i] = i;
    for (std::size_t i = m; i > 1; --i) {
        const auto j = static_cast<std::size_t>(bounded(engine, i));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

std::vector<std::size_t> split_sizes(std::size_t m, std::span<const double> fractions)
{
    std::vector<std::size_t> sizes;
    std::size_t used = 0;
    for (double f : fractions) {
        sizes.push_back(static_cast<std::size_t>(std::floor(f * static_cast<double>(m) + 1e-9)));
        used += sizes.back();
    }
    if (used > m)
        throw Error("split fractions exceed the dataset");
    for (std::size_t k = 0; used < m; k = (k + 1) % sizes.size(), ++used)
        ++sizes[k];
    return sizes;
}

Split split(const Dataset& data, const SplitSpec& spec, std::size_t repeat_index)
{
    spec.validate();
    const double fractions[] = {spec.train_frac, spec.val_frac, spec.test_frac};
    const auto sizes = split_sizes(data.size(), fractions);
    for (std::size_t s : sizes)
        if (s < 2)
            throw Error("split leaves a part with fewer than two examples (M = " + std::to_string(data.size()) +
                        ")");
    const auto p = permutation(data.size(), spec.seed, repeat_index);
    const auto a = static_cast<std::ptrdiff_t>(sizes[0]);
    const auto b = static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]);
    std::vector<std::size_t> train(p.begin(), p.begin() + a);
    std::vector<std::size_t> val(p.begin() + a, p.begin() + b);
    std::vector<std::size_t> test(p.begin() + b, p.end());
    return Split{data.subset(train), data.subset(val), data.subset(test), std::move(train), std::move(val),
                 std::move(test)};
}

TrainTest train_test_split(const Dataset& data, double train_frac, std::uint64_t seed, std::size_t repeat_index)
{
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw Error("train fraction must lie in (0, 1)");
    const double fractions[] = {train_frac, 1.0 - train_frac};
    const auto sizes = split_sizes(data.size(), fractions);
    if (sizes[0] < 2 || sizes[1] < 2)
        throw Error("split leaves a part with fewer than two examples");
    const auto p = permutation(data.size(), seed, repeat_index);
    const auto a = static_cast<std::ptrdiff_t>(sizes[0]);
    const std::vector<std::size_t> train(p.begin(), p.begin() + a);
    const std::vector<std::size_t> test(p.begin() + a, p.end());
    return TrainTest{data.subset(train), data.subset(test)};
}

Dataset make_toy(const ToyParams& params)
{
    if (params.n < 4)
        throw Error("toy dataset needs at least 4 points");
    if (!(params.noise >= 0.0))
        throw Error("toy noise must be nonnegative");
    std::mt19937_64 engine(params.seed);
    auto gaussian = [&] {
        // Box-Muller; 1 - unit() lies in (0, 1].
        const double r = std::sqrt(-2.0 * std::log(1.0 - unit(engine)));
        return r * std::cos(2.0 * std::numbers::pi * unit(engine));
    };

    std::vector<double> features;
    std::vector<int> labels;
    features.reserve(2 * params.n);
    for (std::size_t i = 0; i < params.n; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        const double angle = std::numbers::pi * unit(engine);
        double x = std::cos(angle);
        double y = std::sin(angle);
        if (label < 0) {
            x = 1.0 - x;
            y = 0.5 - y;
        }
        features.push_back(x + params.noise * gaussian());
        features.push_back(y + params.noise * gaussian());
        labels.push_back(label);
    }
    return Dataset(std::move(features), 2, std::move(labels), {"x", "y"});
}

} // namespace mdboost

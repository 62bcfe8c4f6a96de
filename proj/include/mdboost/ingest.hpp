#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mdboost/core.hpp"

namespace mdboost {

/// Comma-separated rows, last column the label. A first row containing a
/// non-numeric cell is read as a header of feature names. Labels must be -1/+1,
/// or 0/1 with 0 mapped to -1 (a warning is appended to `warnings`, or written
/// to stderr when `warnings` is null).
Dataset read_csv(std::istream& in, std::vector<std::string>* warnings = nullptr);
Dataset load_csv(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Writes values with 17 significant digits so that read_csv restores them
/// exactly. A header is written when the dataset has feature names.
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::filesystem::path& path, const Dataset& data);

/// Resolves a relative dataset path against $MDBOOST_DATA_DIR when it is set.
std::filesystem::path resolve_data_path(const std::filesystem::path& path);

struct SplitSpec {
    double train_frac = 0.6;
    double val_frac = 0.2;
    double test_frac = 0.2;
    std::uint64_t seed = 0;
    std::size_t repeats = 1;

    void validate() const;
};

struct Split {
    Dataset train;
    Dataset val;
    Dataset test;
    std::vector<std::size_t> train_index;
    std::vector<std::size_t> val_index;
    std::vector<std::size_t> test_index;
};

/// Permutation of 0..m-1 from std::mt19937_64 seeded with seed XOR
/// repeat_index, shuffled by Fisher-Yates (see README for the exact draw).
std::vector<std::size_t> permutation(std::size_t m, std::uint64_t seed, std::size_t repeat_index);

/// Part sizes floor(frac * M); the remainder goes to train, then val, then test.
std::vector<std::size_t> split_sizes(std::size_t m, std::span<const double> fractions);

Split split(const Dataset& data, const SplitSpec& spec, std::size_t repeat_index);

struct TrainTest {
    Dataset train;
    Dataset test;
};

/// Two-way variant of split() used by the toy experiment.
TrainTest train_test_split(const Dataset& data, double train_frac, std::uint64_t seed, std::size_t repeat_index);

/// Two interleaving half-moons in 2-D with Gaussian noise; n/2 points per
/// class (the odd point goes to +1).
struct ToyParams {
    std::size_t n = 800;
    std::uint64_t seed = 0;
    double noise = 0.1;
};

Dataset make_toy(const ToyParams& params);

} // namespace mdboost

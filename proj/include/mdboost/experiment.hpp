#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdboost/core.hpp"
#include "mdboost/ingest.hpp"
#include "mdboost/mdboost.hpp"

namespace mdboost {

inline const std::vector<double> kDefaultDGrid = {2, 5, 8, 10, 12, 15, 20, 30, 40, 50, 70, 90, 100, 120};

struct CrossValidation {
    /// Validation error for every grid value, in grid order.
    struct Entry {
        double D;
        double val_error;
    };
    double chosen_d = 0.0;
    std::vector<Entry> log;
};

/// Trains on `train` for each D and returns the D with the lowest error on
/// `val`; ties go to the smallest D.
CrossValidation cross_validate_d(const Dataset& train, const Dataset& val, const std::vector<double>& grid,
                                 const TrainParams& params);

struct ExperimentConfig {
    std::filesystem::path dataset;
    std::string algorithm = "mdboost";
    std::vector<double> d_grid = kDefaultDGrid;
    std::vector<std::size_t> checkpoints = {100, 500, 1000};
    SplitSpec split;
    double delta = kDefaultDelta;
    double epsilon = 1e-5;

    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

struct ResultRow {
    std::size_t repeat = 0;
    std::size_t checkpoint = 0;
    /// Absent for AdaBoost.
    std::optional<double> chosen_d;
    double train_error = 0.0;
    double test_error = 0.0;
    /// Normalized training margins.
    double margin_mean = 0.0;
    double margin_variance = 0.0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct Aggregate {
    std::size_t checkpoint = 0;
    double test_mean = 0.0;
    double test_std = 0.0;
    double train_mean = 0.0;
    double train_std = 0.0;
    std::size_t count = 0;

    friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct ResultsTable {
    ExperimentConfig config;
    /// Ordered by (repeat, checkpoint).
    std::vector<ResultRow> rows;
    std::vector<Aggregate> aggregates;
};

/// Mean and sample standard deviation (n - 1; 0 for a single row) per checkpoint.
std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows, const std::vector<std::size_t>& checkpoints);

/// For every repeat: split, (MDBoost) pick D per checkpoint on the validation
/// part, and record train/test errors of the model capped at each checkpoint.
/// A run that stops before a checkpoint is carried forward unchanged.
ResultsTable run_experiment(const ExperimentConfig& config);
/// Same, on an already loaded dataset.
ResultsTable run_experiment(const ExperimentConfig& config, const Dataset& data);

nlohmann::json to_json(const ResultsTable& table);
ResultsTable results_from_json(const nlohmann::json& doc);
void save_results(const std::filesystem::path& path, const ResultsTable& table);
ResultsTable load_results(const std::filesystem::path& path);

} // namespace mdboost

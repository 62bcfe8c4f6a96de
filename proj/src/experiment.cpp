#include "mdboost/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "mdboost/adaboost.hpp"
#include "mdboost/error.hpp"
#include "mdboost/margins.hpp"

namespace mdboost {

CrossValidation cross_validate_d(const Dataset& train, const Dataset& val, const std::vector<double>& grid,
                                 const TrainParams& params)
{
    if (grid.empty())
        throw Error("D grid is empty");
    CrossValidation cv;
    cv.log.resize(grid.size());
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        TrainParams p = params;
        p.D = grid[static_cast<std::size_t>(k)];
        const auto result = mdboost::train(train, p);
        cv.log[static_cast<std::size_t>(k)] = {p.D, error_rate(result.ensemble, val)};
    }
    const auto best = std::min_element(cv.log.begin(), cv.log.end(), [](const auto& a, const auto& b) {
        return a.val_error != b.val_error ? a.val_error < b.val_error : a.D < b.D;
    });
    cv.chosen_d = best->D;
    return cv;
}

void ExperimentConfig::validate() const
{
    if (algorithm != "mdboost" && algorithm != "adaboost")
        throw UsageError("algorithm must be 'mdboost' or 'adaboost', got '" + algorithm + "'");
    if (algorithm == "mdboost" && d_grid.empty())
        throw UsageError("D grid must not be empty");
    for (double d : d_grid)
        if (!(d > 0.0))
            throw UsageError("D grid values must be positive");
    if (checkpoints.empty())
        throw UsageError("need at least one checkpoint");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1)
            throw UsageError("checkpoints must be positive");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw UsageError("checkpoints must be strictly ascending");
    }
    try {
        split.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (!(delta > 0.0) || !(epsilon > 0.0))
        throw UsageError("delta and epsilon must be positive");
}

nlohmann::json to_json(const ExperimentConfig& config)
{
    return {{"dataset", config.dataset.string()},
            {"algorithm", config.algorithm},
            {"d_grid", config.d_grid},
            {"checkpoints", config.checkpoints},
            {"split",
             {{"train", config.split.train_frac},
              {"val", config.split.val_frac},
              {"test", config.split.test_frac},
              {"seed", config.split.seed},
              {"repeats", config.split.repeats}}},
            {"delta", config.delta},
            {"epsilon", config.epsilon}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc)
{
    static const std::set<std::string> known = {"dataset", "algorithm", "d_grid", "checkpoints",
                                                "split",   "delta",     "epsilon"};
    static const std::set<std::string> known_split = {"train", "val", "test", "seed", "repeats"};
    if (!doc.is_object())
        throw UsageError("experiment config must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!known.contains(key))
            throw UsageError("unknown experiment config key '" + key + "'");

    ExperimentConfig config;
    try {
        config.dataset = doc.at("dataset").get<std::string>();
        config.algorithm = doc.value("algorithm", config.algorithm);
        config.d_grid = doc.value("d_grid", config.d_grid);
        config.checkpoints = doc.value("checkpoints", config.checkpoints);
        config.delta = doc.value("delta", config.delta);
        config.epsilon = doc.value("epsilon", config.epsilon);
        if (doc.contains("split")) {
            const auto& s = doc.at("split");
            for (const auto& [key, value] : s.items())
                if (!known_split.contains(key))
                    throw UsageError("unknown split key '" + key + "'");
            config.split.train_frac = s.value("train", config.split.train_frac);
            config.split.val_frac = s.value("val", config.split.val_frac);
            config.split.test_frac = s.value("test", config.split.test_frac);
            config.split.seed = s.value("seed", config.split.seed);
            config.split.repeats = s.value("repeats", config.split.repeats);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed experiment config: ") + e.what());
    }
    config.validate();
    return config;
}

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows, const std::vector<std::size_t>& checkpoints)
{
    std::vector<Aggregate> out;
    for (std::size_t cp : checkpoints) {
        std::vector<double> test;
        std::vector<double> train;
        for (const auto& row : rows)
            if (row.checkpoint == cp) {
                test.push_back(row.test_error);
                train.push_back(row.train_error);
            }
        auto moments = [](const std::vector<double>& v, double& mean, double& sd) {
            mean = 0.0;
            sd = 0.0;
            if (v.empty())
                return;
            for (double x : v)
                mean += x;
            mean /= static_cast<double>(v.size());
            if (v.size() < 2)
                return;
            for (double x : v)
                sd += (x - mean) * (x - mean);
            sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
        };
        Aggregate a;
        a.checkpoint = cp;
        a.count = test.size();
        moments(test, a.test_mean, a.test_std);
        moments(train, a.train_mean, a.train_std);
        out.push_back(a);
    }
    return out;
}

namespace {

// Ensemble at each checkpoint; checkpoints after an early stop get the final
// ensemble.
class CheckpointRecorder {
public:
    explicit CheckpointRecorder(const std::vector<std::size_t>& checkpoints) : checkpoints_(checkpoints) {}

    IterationObserver observer()
    {
        return [this](std::size_t n, const Ensemble& e) {
            if (std::find(checkpoints_.begin(), checkpoints_.end(), n) != checkpoints_.end())
                snapshots_[n] = e;
        };
    }

    std::vector<Ensemble> finish(const Ensemble& final_ensemble) const
    {
        std::vector<Ensemble> out;
        for (std::size_t cp : checkpoints_) {
            const auto it = snapshots_.find(cp);
            out.push_back(it != snapshots_.end() ? it->second : final_ensemble);
        }
        return out;
    }

private:
    std::vector<std::size_t> checkpoints_;
    std::map<std::size_t, Ensemble> snapshots_;
};

ResultRow evaluate(const Ensemble& ensemble, const Dataset& train, const Dataset& test)
{
    ResultRow row;
    row.train_error = error_rate(ensemble, train);
    row.test_error = error_rate(ensemble, test);
    if (ensemble.weight_sum() > 0.0) {
        const auto report = margin_report(ensemble, train);
        row.margin_mean = report.mean;
        row.margin_variance = report.variance;
    }
    return row;
}

std::vector<ResultRow> run_repeat(const ExperimentConfig& config, const Dataset& data, std::size_t repeat)
{
    const Split parts = split(data, config.split, repeat);
    const std::size_t horizon = config.checkpoints.back();
    std::vector<ResultRow> rows;

    if (config.algorithm == "adaboost") {
        CheckpointRecorder recorder(config.checkpoints);
        AdaBoostParams params;
        params.t_max = horizon;
        params.seed = config.split.seed;
        const auto result = train_adaboost(parts.train, params, recorder.observer());
        const auto snapshots = recorder.finish(result.ensemble);
        for (std::size_t c = 0; c < config.checkpoints.size(); ++c) {
            ResultRow row = evaluate(snapshots[c], parts.train, parts.test);
            row.repeat = repeat;
            row.checkpoint = config.checkpoints[c];
            rows.push_back(row);
        }
        return rows;
    }

    // One run per grid value up to the last checkpoint; D is chosen per
    // checkpoint on the validation part.
    std::vector<std::vector<Ensemble>> per_d;
    for (double d : config.d_grid) {
        CheckpointRecorder recorder(config.checkpoints);
        TrainParams params;
        params.D = d;
        params.delta = config.delta;
        params.epsilon = config.epsilon;
        params.n_max = horizon;
        params.seed = config.split.seed;
        const auto result = train(parts.train, params, recorder.observer());
        per_d.push_back(recorder.finish(result.ensemble));
    }
    for (std::size_t c = 0; c < config.checkpoints.size(); ++c) {
        std::size_t best = 0;
        double best_error = 2.0;
        for (std::size_t k = 0; k < config.d_grid.size(); ++k) {
            const double err = error_rate(per_d[k][c], parts.val);
            if (err < best_error || (err == best_error && config.d_grid[k] < config.d_grid[best])) {
                best = k;
                best_error = err;
            }
        }
        ResultRow row = evaluate(per_d[best][c], parts.train, parts.test);
        row.repeat = repeat;
        row.checkpoint = config.checkpoints[c];
        row.chosen_d = config.d_grid[best];
        rows.push_back(row);
    }
    return rows;
}

} // namespace

ResultsTable run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const Dataset data = load_csv(resolve_data_path(config.dataset));
    return run_experiment(config, data);
}

ResultsTable run_experiment(const ExperimentConfig& config, const Dataset& data)
{
    config.validate();
    const std::size_t repeats = config.split.repeats;
    std::vector<std::vector<ResultRow>> per_repeat(repeats);
    std::vector<std::string> failures(repeats);

    const auto n = static_cast<std::ptrdiff_t>(repeats);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        try {
            per_repeat[static_cast<std::size_t>(r)] = run_repeat(config, data, static_cast<std::size_t>(r));
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(r)] = e.what();
        }
    }
    for (std::size_t r = 0; r < repeats; ++r)
        if (!failures[r].empty())
            throw Error("repeat " + std::to_string(r) + ": " + failures[r]);

    ResultsTable table;
    table.config = config;
    for (auto& rows : per_repeat)
        table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    table.aggregates = aggregate(table.rows, config.checkpoints);
    return table;
}

nlohmann::json to_json(const ResultsTable& table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"repeat", r.repeat},
                        {"checkpoint", r.checkpoint},
                        {"chosen_d", r.chosen_d ? nlohmann::json(*r.chosen_d) : nlohmann::json(nullptr)},
                        {"train_error", r.train_error},
                        {"test_error", r.test_error},
                        {"margin_mean", r.margin_mean},
                        {"margin_variance", r.margin_variance}});
    nlohmann::json aggregates = nlohmann::json::array();
    for (const auto& a : table.aggregates)
        aggregates.push_back({{"checkpoint", a.checkpoint},
                              {"count", a.count},
                              {"test_mean", a.test_mean},
                              {"test_std", a.test_std},
                              {"train_mean", a.train_mean},
                              {"train_std", a.train_std}});
    return {{"config", to_json(table.config)}, {"rows", std::move(rows)}, {"aggregates", std::move(aggregates)}};
}

ResultsTable results_from_json(const nlohmann::json& doc)
{
    ResultsTable table;
    try {
        table.config = experiment_config_from_json(doc.at("config"));
        for (const auto& r : doc.at("rows")) {
            ResultRow row;
            row.repeat = r.at("repeat").get<std::size_t>();
            row.checkpoint = r.at("checkpoint").get<std::size_t>();
            if (!r.at("chosen_d").is_null())
                row.chosen_d = r.at("chosen_d").get<double>();
            row.train_error = r.at("train_error").get<double>();
            row.test_error = r.at("test_error").get<double>();
            row.margin_mean = r.at("margin_mean").get<double>();
            row.margin_variance = r.at("margin_variance").get<double>();
            table.rows.push_back(row);
        }
        for (const auto& a : doc.at("aggregates")) {
            Aggregate agg;
            agg.checkpoint = a.at("checkpoint").get<std::size_t>();
            agg.count = a.value("count", std::size_t{0});
            agg.test_mean = a.at("test_mean").get<double>();
            agg.test_std = a.at("test_std").get<double>();
            agg.train_mean = a.at("train_mean").get<double>();
            agg.train_std = a.at("train_std").get<double>();
            table.aggregates.push_back(agg);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed results document: ") + e.what());
    }
    return table;
}

void save_results(const std::filesystem::path& path, const ResultsTable& table)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out << to_json(table).dump(2) << '\n';
    if (!out)
        throw Error("failed writing " + path.string());
}

ResultsTable load_results(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open results " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("cannot parse results " + path.string() + ": " + e.what());
    }
    return results_from_json(doc);
}

} // namespace mdboost

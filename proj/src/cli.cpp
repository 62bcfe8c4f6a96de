#include "mdboost/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "format.hpp"
#include "mdboost/adaboost.hpp"
#include "mdboost/error.hpp"
#include "mdboost/experiment.hpp"
#include "mdboost/ingest.hpp"
#include "mdboost/margins.hpp"
#include "mdboost/mdboost.hpp"
#include "mdboost/model_io.hpp"
#include "mdboost/stats.hpp"

namespace mdboost::cli {

namespace {

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    return out;
}

void write_json(const std::string& path, const nlohmann::json& doc)
{
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
}

struct TrainOptions {
    std::string data;
    std::string algo = "mdboost";
    std::optional<double> d;
    std::vector<double> d_grid = kDefaultDGrid;
    double delta = kDefaultDelta;
    double epsilon = 1e-5;
    std::size_t max_iters = 1000;
    std::uint64_t seed = 0;
    std::string out;
    std::string trace;
};

void write_trace(const std::string& path, const TrainTrace& trace)
{
    auto out = open_output(path);
    out << "# termination=" << to_string(trace.termination) << '\n'
        << "iteration,edge,r,objective,margin_mean,margin_variance\n";
    for (const auto& r : trace.records)
        out << r.iteration << ',' << detail::format_double(r.edge) << ',' << detail::format_double(r.r) << ','
            << detail::format_double(r.objective) << ',' << detail::format_double(r.margin_mean) << ','
            << detail::format_double(r.margin_variance) << '\n';
}

int run_train(const TrainOptions& o)
{
    const Dataset data = load_csv(resolve_data_path(o.data));
    Model model;
    model.algorithm = o.algo;
    model.delta = o.delta;
    TrainResult result;

    if (o.algo == "adaboost") {
        AdaBoostParams params;
        params.t_max = o.max_iters;
        params.seed = o.seed;
        result = train_adaboost(data, params);
    } else {
        TrainParams params;
        params.delta = o.delta;
        params.epsilon = o.epsilon;
        params.n_max = o.max_iters;
        params.seed = o.seed;
        if (o.d) {
            params.D = *o.d;
        } else {
            // Choose D on a held-out quarter of the training file.
            const TrainTest parts = train_test_split(data, 0.75, o.seed, 0);
            const auto cv = cross_validate_d(parts.train, parts.test, o.d_grid, params);
            params.D = cv.chosen_d;
            std::cout << "cross-validated D = " << detail::format_double(params.D) << '\n';
        }
        result = train(data, params);
    }
    model.ensemble = result.ensemble;
    save_model(o.out, model);
    if (!o.trace.empty())
        write_trace(o.trace, result.trace);

    std::cout << "algorithm: " << o.algo << '\n'
              << "termination: " << to_string(result.trace.termination) << '\n'
              << "weak classifiers: " << result.ensemble.members.size() << '\n'
              << "training error: " << detail::format_double(error_rate(result.ensemble, data)) << '\n';
    return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path, const std::string& out_path)
{
    const Model model = load_model(model_path);
    const Dataset data = load_csv(resolve_data_path(data_path));
    const auto predictions = predict(model.ensemble, data);
    auto out = open_output(out_path);
    out << "prediction\n";
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        out << predictions[i] << '\n';
        wrong += predictions[i] != data.label(i);
    }
    std::cout << "error: " << detail::format_double(static_cast<double>(wrong) / static_cast<double>(data.size()))
              << '\n';
    return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_path)
{
    std::ifstream in(config_path);
    if (!in)
        throw Error("cannot open config " + config_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("cannot parse config " + config_path + ": " + e.what());
    }
    const ExperimentConfig config = experiment_config_from_json(doc);
    const ResultsTable table = run_experiment(config);
    save_results(out_path, table);
    for (const auto& a : table.aggregates)
        std::cout << "checkpoint " << a.checkpoint << ": test " << detail::format_double(a.test_mean) << " +- "
                  << detail::format_double(a.test_std) << ", train " << detail::format_double(a.train_mean)
                  << " +- " << detail::format_double(a.train_std) << '\n';
    return 0;
}

int run_margins(const std::string& model_path, const std::string& data_path, const std::string& out_path,
                const std::string& frequency_out, const std::vector<std::string>& extra_models)
{
    const Model model = load_model(model_path);
    const Dataset data = load_csv(resolve_data_path(data_path));
    const MarginReport report = margin_report(model.ensemble, data);
    {
        auto out = open_output(out_path);
        write_margin_csv(out, report);
    }
    if (!frequency_out.empty()) {
        std::vector<Ensemble> ensembles{model.ensemble};
        for (const auto& path : extra_models)
            ensembles.push_back(load_model(path).ensemble);
        const auto freq = feature_frequency(ensembles, data.n_features());
        auto out = open_output(frequency_out);
        write_frequency_csv(out, freq, data.feature_names());
    }
    std::cout << "mean: " << detail::format_double(report.mean) << '\n'
              << "variance: " << detail::format_double(report.variance) << '\n'
              << "min: " << detail::format_double(report.minimum) << '\n';
    return 0;
}

nlohmann::json friedman_json(const stats::ErrorTable& table, const stats::FriedmanResult& f)
{
    nlohmann::json ranks = nlohmann::json::object();
    for (std::size_t j = 0; j < table.n_algorithms(); ++j)
        ranks[table.algorithms[j]] = f.average_ranks[j];
    return {{"statistic", f.statistic},
            {"critical_value", f.critical_value},
            {"reject", f.reject},
            {"average_ranks", std::move(ranks)}};
}

int run_stats(const std::string& errors_path, const std::string& test, double alpha, const std::string& control,
              const std::string& out_path)
{
    const stats::ErrorTable table = stats::load_error_table(errors_path);
    const std::size_t k = table.n_algorithms();
    nlohmann::json doc = {{"test", test}, {"alpha", alpha}, {"datasets", table.n_datasets()}};

    std::vector<std::size_t> controls;
    if (!control.empty()) {
        const auto it = std::find(table.algorithms.begin(), table.algorithms.end(), control);
        if (it == table.algorithms.end())
            throw UsageError("unknown control algorithm '" + control + "'");
        controls.push_back(static_cast<std::size_t>(it - table.algorithms.begin()));
    } else {
        for (std::size_t j = 0; j < k; ++j)
            controls.push_back(j);
    }

    if (test == "wilcoxon") {
        nlohmann::json comparisons = nlohmann::json::array();
        for (std::size_t a : controls)
            for (std::size_t b = 0; b < k; ++b) {
                if (a == b)
                    continue;
                const auto d = stats::wilcoxon_signed_rank(table.column(a), table.column(b), alpha);
                auto entry = stats::to_json(d);
                entry["algorithm"] = table.algorithms[a];
                entry["versus"] = table.algorithms[b];
                comparisons.push_back(std::move(entry));
            }
        doc["comparisons"] = std::move(comparisons);
    } else if (test == "friedman") {
        doc["friedman"] = friedman_json(table, stats::friedman(table, alpha));
    } else {
        const auto f = stats::friedman(table, alpha);
        doc["friedman"] = friedman_json(table, f);
        nlohmann::json comparisons = nlohmann::json::array();
        for (std::size_t c : controls)
            for (const auto& p : stats::bonferroni_dunn(f.average_ranks, table.n_datasets(), c, alpha)) {
                auto entry = stats::to_json(p.decision);
                entry["algorithm"] = table.algorithms[c];
                entry["versus"] = table.algorithms[p.algorithm];
                comparisons.push_back(std::move(entry));
            }
        doc["comparisons"] = std::move(comparisons);
    }
    write_json(out_path, doc);
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int run_toygen(std::size_t n, std::uint64_t seed, double noise, const std::string& out_path)
{
    ToyParams params;
    params.n = n;
    params.seed = seed;
    params.noise = noise;
    save_csv(out_path, make_toy(params));
    return 0;
}

} // namespace

int dispatch(int argc, const char* const* argv)
{
    CLI::App app{"Margin-distribution boosting (MDBoost) and AdaBoost with decision stumps"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all");

    TrainOptions train_opts;
    auto* train_cmd = app.add_subcommand("train", "Train an ensemble on a CSV dataset");
    train_cmd->add_option("--data", train_opts.data, "Training CSV (last column is the label)")->required();
    train_cmd->add_option("--algo", train_opts.algo, "mdboost or adaboost")
        ->check(CLI::IsMember({"mdboost", "adaboost"}));
    train_cmd->add_option("--d", train_opts.d, "MDBoost weight budget D (cross-validated when omitted)")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--d-grid", train_opts.d_grid, "Candidate D values for cross-validation");
    train_cmd->add_option("--delta", train_opts.delta, "Regularizer added to the scatter matrix")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--epsilon", train_opts.epsilon, "Column generation termination threshold")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--max-iters", train_opts.max_iters, "Maximum iterations (rounds for AdaBoost)")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", train_opts.seed, "Seed for the cross-validation split");
    train_cmd->add_option("--out", train_opts.out, "Model JSON to write")->required();
    train_cmd->add_option("--trace", train_opts.trace, "Optional per-iteration trace CSV");

    std::string model_path, data_path, out_path, config_path, errors_path, test_name, control, frequency_out;
    std::vector<std::string> frequency_models;
    double alpha = 0.05;

    auto* predict_cmd = app.add_subcommand("predict", "Predict labels with a trained model");
    predict_cmd->add_option("--model", model_path, "Model JSON")->required();
    predict_cmd->add_option("--data", data_path, "CSV dataset")->required();
    predict_cmd->add_option("--out", out_path, "Predictions CSV to write")->required();

    auto* experiment_cmd = app.add_subcommand("experiment", "Run a repeated split/cross-validation experiment");
    experiment_cmd->add_option("--config", config_path, "Experiment config JSON")->required();
    experiment_cmd->add_option("--out", out_path, "Results JSON to write")->required();

    auto* margins_cmd = app.add_subcommand("margins", "Export the normalized margin distribution");
    margins_cmd->add_option("--model", model_path, "Model JSON")->required();
    margins_cmd->add_option("--data", data_path, "CSV dataset")->required();
    margins_cmd->add_option("--out", out_path, "Margin CSV to write")->required();
    margins_cmd->add_option("--frequency-out", frequency_out, "Optional feature-selection frequency CSV");
    margins_cmd->add_option("--frequency-model", frequency_models,
                            "Additional models averaged into the feature frequency");

    auto* stats_cmd = app.add_subcommand("stats", "Compare classifiers over datasets");
    stats_cmd->add_option("--errors", errors_path, "Error table CSV (datasets x algorithms)")->required();
    stats_cmd->add_option("--test", test_name, "wilcoxon, friedman or bonferroni-dunn")
        ->required()
        ->check(CLI::IsMember({"wilcoxon", "friedman", "bonferroni-dunn"}));
    stats_cmd->add_option("--alpha", alpha, "Significance level (one-tailed for wilcoxon)")
        ->check(CLI::Range(0.0, 1.0));
    stats_cmd->add_option("--control", control, "Restrict comparisons to this algorithm");
    stats_cmd->add_option("--out", out_path, "Decisions JSON to write")->required();

    std::size_t toy_n = 800;
    std::uint64_t toy_seed = 0;
    double toy_noise = ToyParams{}.noise;
    auto* toygen_cmd = app.add_subcommand("toygen", "Write the 2-D two-moons toy dataset");
    toygen_cmd->add_option("--n", toy_n, "Number of points")->check(CLI::Range(4, 100000000));
    toygen_cmd->add_option("--seed", toy_seed, "Generator seed");
    toygen_cmd->add_option("--noise", toy_noise, "Gaussian noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    toygen_cmd->add_option("--out", out_path, "CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        const auto chosen = app.get_subcommands();
        std::cerr << (chosen.empty() ? app.help() : chosen.front()->help());
        return 1;
    }

    try {
        if (*train_cmd)
            return run_train(train_opts);
        if (*predict_cmd)
            return run_predict(model_path, data_path, out_path);
        if (*experiment_cmd)
            return run_experiment_cmd(config_path, out_path);
        if (*margins_cmd)
            return run_margins(model_path, data_path, out_path, frequency_out, frequency_models);
        if (*stats_cmd)
            return run_stats(errors_path, test_name, alpha, control, out_path);
        if (*toygen_cmd)
            return run_toygen(toy_n, toy_seed, toy_noise, out_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace mdboost::cli

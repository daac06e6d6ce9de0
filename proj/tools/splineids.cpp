// Command-line front end: simulate traffic, run the five-model comparison,
// emit prediction curves, and train/evaluate single persisted models.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "splineids/errors.hpp"
#include "splineids/model_io.hpp"
#include "splineids/pipeline.hpp"
#include "splineids/vanet_sim.hpp"

using namespace splineids;

namespace {

struct ExperimentArgs {
    std::string data;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    double split_ratio = 0.8;
    std::uint64_t split_seed = 42;
    std::string knots = "0.25,0.5,0.75";
    std::string models = "logistic,linear,quadratic,cubic,bspline";
    int bspline_degree = 3;
    double threshold = 0.5;
    std::string filter = "all";
};

void add_experiment_options(CLI::App* cmd, ExperimentArgs& args, bool with_models) {
    auto* data = cmd->add_option("--data", args.data, "Traffic CSV to use instead of simulating");
    cmd->add_option("--scenario", args.scenario, "Scenario JSON for simulated data")->excludes(data);
    cmd->add_option("--seed", args.seed, "Override the scenario seed");
    cmd->add_option("--split-ratio", args.split_ratio, "Training fraction")->capture_default_str();
    cmd->add_option("--split-seed", args.split_seed, "Seed of the train/test shuffle")->capture_default_str();
    cmd->add_option("--knots", args.knots, "Knot quantile probabilities")->capture_default_str();
    if (with_models)
        cmd->add_option("--models", args.models, "Models to fit")->capture_default_str();
    cmd->add_option("--bspline-degree", args.bspline_degree, "B-spline degree (1-3)")->capture_default_str();
    cmd->add_option("--threshold", args.threshold, "Attack probability threshold")->capture_default_str();
    cmd->add_option("--congestion", args.filter, "Record filter: all, congested or free")->capture_default_str();
}

ExperimentConfig to_config(const ExperimentArgs& args) {
    ExperimentConfig config;
    if (!args.data.empty()) {
        config.data_path = args.data;
    } else {
        ScenarioConfig scenario = args.scenario.empty() ? ScenarioConfig::defaults() : load_scenario(args.scenario);
        if (args.seed) scenario.seed = *args.seed;
        config.scenario = scenario;
    }
    config.split_ratio = args.split_ratio;
    config.split_seed = args.split_seed;
    config.knot_probs = parse_probability_list(args.knots);
    config.models = parse_model_list(args.models);
    config.bspline_degree = args.bspline_degree;
    config.threshold = args.threshold;
    config.filter = congestion_filter_from_token(args.filter);
    config.validate();
    return config;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    fn(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spline-regression intrusion detection on packet-delay features"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic VANET traffic records");
    std::string sim_config, sim_out;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::size_t> sim_records;
    simulate->add_option("--config", sim_config, "Scenario JSON (defaults to the built-in scenario)");
    simulate->add_option("--seed", sim_seed, "Override the scenario seed");
    simulate->add_option("--records", sim_records, "Override the record count");
    simulate->add_option("--out", sim_out, "Output CSV (stdout when omitted)");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Fit and compare logistic and spline models");
    ExperimentArgs exp_args;
    std::string report_path, report_format = "text";
    add_experiment_options(experiment, exp_args, true);
    experiment->add_option("--report", report_path, "Report output path (stdout when omitted)");
    experiment->add_option("--format", report_format, "text or csv")->capture_default_str();

    // curves
    auto* curves = app.add_subcommand("curves", "Emit predicted-probability curves over the delay range");
    ExperimentArgs curve_args;
    int grid = 200;
    std::string curves_out;
    add_experiment_options(curves, curve_args, true);
    curves->add_option("--grid", grid, "Number of grid points")->capture_default_str();
    curves->add_option("--out", curves_out, "Output CSV (stdout when omitted)");

    // train
    auto* train = app.add_subcommand("train", "Fit a single model on the training split and save it");
    ExperimentArgs train_args;
    std::string train_model, train_save;
    add_experiment_options(train, train_args, false);
    train->add_option("--model", train_model, "logistic, linear, quadratic, cubic or bspline")->required();
    train->add_option("--save", train_save, "Model file to write")->required();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on a traffic CSV");
    std::string eval_load, eval_data;
    std::optional<double> eval_threshold;
    evaluate->add_option("--load", eval_load, "Model file")->required();
    evaluate->add_option("--data", eval_data, "Traffic CSV")->required();
    evaluate->add_option("--threshold", eval_threshold, "Override the saved threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*simulate) {
            ScenarioConfig scenario = sim_config.empty() ? ScenarioConfig::defaults() : load_scenario(sim_config);
            if (sim_seed) scenario.seed = *sim_seed;
            if (sim_records) scenario.n_records = *sim_records;
            const auto records = generate_dataset(scenario);
            with_output(sim_out, [&](std::ostream& out) { write_csv(out, records); });
        } else if (*experiment) {
            const auto format = report_format_from_token(report_format);
            const auto result = run_experiment(to_config(exp_args));
            with_output(report_path, [&](std::ostream& out) { emit_report(result.report, format, out); });
            if (result.report.clamped_test_points > 0)
                std::cerr << "warning: " << result.report.clamped_test_points
                          << " test delays clamped to the B-spline domain\n";
        } else if (*curves) {
            const auto result = run_experiment(to_config(curve_args));
            const auto table = emit_curves(result, grid);
            with_output(curves_out, [&](std::ostream& out) { write_curves_csv(table, out); });
        } else if (*train) {
            train_args.models = train_model;
            const auto config = to_config(train_args);
            const auto result = run_experiment(config);
            const auto& row = result.report.rows.front();
            save_model(train_save, {row.kind, result.models.front().model, config.threshold});
            std::cout << display_name(row.kind) << ": test accuracy " << format_percent(row.accuracy) << " on "
                      << result.report.n_test << " records, saved to " << train_save << '\n';
        } else if (*evaluate) {
            const SavedModel saved = load_model(eval_load);
            const auto records = read_csv(std::filesystem::path(eval_data));
            if (records.empty()) throw EmptyData("no records in " + eval_data);
            std::size_t clamped = 0;
            const auto dm = build_clamped_design(saved.model.basis, packet_delays(records), &clamped);
            const auto predicted = classify(predict_prob(saved.model, dm), eval_threshold.value_or(saved.threshold));
            const auto cm = confusion_matrix(predicted, labels(records));
            std::string pct = format_percent(accuracy(cm));
            pct.pop_back();
            std::cout << "model,tp,fp,tn,fn,n,accuracy_pct,clamped\n"
                      << to_token(saved.kind) << ',' << cm.tp << ',' << cm.fp << ',' << cm.tn << ',' << cm.fn << ','
                      << cm.total() << ',' << pct << ',' << clamped << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "splineids/errors.hpp"
#include "splineids/model_io.hpp"
#include "splineids/pipeline.hpp"

using namespace splineids;
namespace fs = std::filesystem;

namespace {

std::string render(const ExperimentReport& report, ReportFormat format = ReportFormat::Text) {
    std::ostringstream out;
    emit_report(report, format, out);
    return out.str();
}

ExperimentReport single_row(ConfusionMatrix cm) {
    ExperimentReport report;
    report.rows.push_back({ModelKind::Logistic, cm, accuracy(cm), true, false, 6});
    report.n_test = cm.total();
    report.n_train = 4 * cm.total();
    report.knots = {1.0, 2.0, 3.0};
    report.digest = "0123456789abcdef";
    return report;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "splineids_test_pipeline";
    fs::create_directories(dir);
    return dir / name;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SPLINEIDS_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("split sizes and determinism") {
    const auto records = generate_dataset(ScenarioConfig::defaults());
    const auto [train, test] = split_train_test(records, 0.8, 42);
    CHECK(train.size() == 480);
    CHECK(test.size() == 120);

    const auto [train2, test2] = split_train_test(records, 0.8, 42);
    CHECK(train == train2);
    CHECK(test == test2);

    const auto [train3, test3] = split_train_test(records, 0.8, 43);
    CHECK(train3 != train);

    // The split is a partition of the input.
    std::multiset<double> all, parts;
    for (const auto& r : records) all.insert(r.packet_delay_ms);
    for (const auto& r : train) parts.insert(r.packet_delay_ms);
    for (const auto& r : test) parts.insert(r.packet_delay_ms);
    CHECK(all == parts);
}

TEST_CASE("split errors") {
    const auto records = generate_dataset(ScenarioConfig::defaults());
    const std::vector<TrafficRecord> two(records.begin(), records.begin() + 2);
    CHECK_THROWS_AS(split_train_test(two, 0.99, 1), SplitError);
    CHECK_THROWS_AS(split_train_test(records, 0.0, 1), SplitError);
    CHECK_THROWS_AS(split_train_test(records, 1.0, 1), SplitError);
    CHECK_THROWS_AS(split_train_test({}, 0.8, 1), SplitError);
}

TEST_CASE("expanded domain") {
    const std::vector<double> d{10.0, 30.0, 20.0};
    const auto [lo, hi] = expanded_domain(d);
    CHECK(lo == doctest::Approx(9.8).epsilon(1e-15));
    CHECK(hi == doctest::Approx(30.2).epsilon(1e-15));
}

TEST_CASE("basis choice per model") {
    const KnotVectord knots{2.0, 3.0, 4.0};
    const std::pair<double, double> dom{1.0, 5.0};
    CHECK_FALSE(basis_for(ModelKind::Logistic, knots, dom, 3).has_value());
    CHECK(basis_for(ModelKind::LinearSpline, knots, dom, 3)->dimension() == 4);
    CHECK(basis_for(ModelKind::QuadraticSpline, knots, dom, 3)->dimension() == 5);
    CHECK(basis_for(ModelKind::CubicSpline, knots, dom, 3)->dimension() == 6);
    CHECK(basis_for(ModelKind::BSpline, knots, dom, 3)->dimension() == 7);
    CHECK(basis_for(ModelKind::BSpline, knots, dom, 3)->kind() == BasisKind::BSpline);
}

TEST_CASE("model and probability list parsing") {
    CHECK(parse_model_list("logistic,bspline") == std::vector<ModelKind>{ModelKind::Logistic, ModelKind::BSpline});
    CHECK(parse_model_list("all").size() == 5);
    CHECK_THROWS_AS(parse_model_list("logistic,svm"), ConfigError);
    CHECK_THROWS_AS(parse_model_list("logistic,logistic"), ConfigError);
    CHECK(parse_probability_list("0.25,0.5,0.75") == std::vector<double>{0.25, 0.5, 0.75});
    CHECK_THROWS_AS(parse_probability_list("0.5,abc"), ConfigError);
}

TEST_CASE("single-model run is reproducible") {
    ExperimentConfig config;
    config.models = {ModelKind::Logistic};
    const auto a = run_experiment(config);
    const auto b = run_experiment(config);
    REQUIRE(a.report.rows.size() == 1);
    CHECK(a.report.rows[0].kind == ModelKind::Logistic);
    CHECK(render(a.report) == render(b.report));
    CHECK(a.report.digest == b.report.digest);
    CHECK(a.models[0].model.parameters() == b.models[0].model.parameters());
}

TEST_CASE("rows follow the requested order") {
    ExperimentConfig config;
    config.models = {ModelKind::BSpline, ModelKind::Logistic, ModelKind::CubicSpline};
    const auto result = run_experiment(config);
    REQUIRE(result.report.rows.size() == 3);
    CHECK(result.report.rows[0].kind == ModelKind::BSpline);
    CHECK(result.report.rows[1].kind == ModelKind::Logistic);
    CHECK(result.report.rows[2].kind == ModelKind::CubicSpline);
}

TEST_CASE("knots come from training delays only") {
    ExperimentConfig config;
    config.models = {ModelKind::Logistic};
    auto records = generate_dataset(ScenarioConfig::defaults());
    const auto base = run_experiment(config, records);

    // Perturb every record that lands in the test partition.
    const auto [train, test] = split_train_test(records, config.split_ratio, config.split_seed);
    const std::set<double> test_delays = [&] {
        std::set<double> s;
        for (const auto& r : test) s.insert(r.packet_delay_ms);
        return s;
    }();
    for (auto& r : records)
        if (test_delays.count(r.packet_delay_ms)) r.packet_delay_ms *= 7.0;
    const auto perturbed = run_experiment(config, records);
    CHECK(perturbed.report.knots == base.report.knots);
    CHECK(perturbed.domain == base.domain);

    std::vector<double> train_delays = packet_delays(train);
    CHECK(base.report.knots[1] == quantile(train_delays, 0.5));
}

TEST_CASE("report arithmetic") {
    const auto result = run_experiment(ExperimentConfig{});
    REQUIRE(result.report.rows.size() == 5);
    CHECK(result.report.n_train + result.report.n_test == 600);
    for (const auto& row : result.report.rows) {
        CHECK(row.cm.total() == result.report.n_test);
        CHECK(row.accuracy == static_cast<double>(row.cm.tp + row.cm.tn) / row.cm.total());
    }
}

TEST_CASE("percent rendering and footnote") {
    CHECK(format_percent(119.0 / 120.0) == "99.17%");
    CHECK(format_percent(118.0 / 120.0) == "98.33%");
    CHECK(format_percent(115.0 / 120.0) == "95.83%");
    CHECK(format_percent(1.0) == "100.00%");

    const auto a = render(single_row({61, 1, 58, 0}));
    CHECK(a.find("99.17%") != std::string::npos);
    const auto b = render(single_row({59, 1, 59, 1}));
    CHECK(b.find("98.33%") != std::string::npos);
    CHECK(b.find("98.30%") != std::string::npos);  // named in the footnote only
    CHECK(b.find("(TP + TN) / N") != std::string::npos);

    const auto csv = render(single_row({59, 1, 59, 1}), ReportFormat::Csv);
    CHECK(csv ==
          "model,tp,fp,tn,fn,n,accuracy_pct,converged,separation,iterations\n"
          "logistic,59,1,59,1,120,98.33,1,0,6\n");
}

TEST_CASE("probability curves") {
    const auto result = run_experiment(ExperimentConfig{});
    const auto table = emit_curves(result);
    CHECK(table.digest == result.report.digest);
    CHECK(table.delay_ms.size() == 200);
    CHECK(table.probability.cols() == 5);
    CHECK(table.delay_ms[0] == result.domain.first);
    CHECK(table.delay_ms[199] == result.domain.second);
    CHECK(table.probability.minCoeff() > 0.0);
    CHECK(table.probability.maxCoeff() < 1.0);

    const auto& logistic = result.models[0].model;
    REQUIRE(logistic.coefficients.size() == 1);
    if (logistic.coefficients[0] > 0.0)
        for (Eigen::Index i = 1; i < 200; ++i) CHECK(table.probability(i, 0) >= table.probability(i - 1, 0));

    std::ostringstream out;
    write_curves_csv(table, out);
    const std::string text = out.str();
    CHECK(text.rfind("delay_ms,logistic,linear,quadratic,cubic,bspline\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 201);
    CHECK_THROWS_AS(emit_curves(result, 1), ConfigError);
}

TEST_CASE("clamping into the basis domain") {
    const auto spec = SplineBasisSpecd::bspline(3, KnotVectord{2.0}, {1.0, 3.0});
    const std::optional<SplineBasisSpecd> basis = spec;
    CHECK(clamp_to_basis(basis, 0.5) == 1.0);
    CHECK(clamp_to_basis(basis, 3.5) == 3.0);
    CHECK(clamp_to_basis(basis, 2.5) == 2.5);
    CHECK(clamp_to_basis(std::nullopt, 99.0) == 99.0);
    std::size_t clamped = 0;
    const std::vector<double> x{0.0, 1.5, 4.0};
    build_clamped_design(basis, x, &clamped);
    CHECK(clamped == 2);
}

TEST_CASE("model save and load") {
    const auto result = run_experiment(ExperimentConfig{});
    for (const auto& fitted : result.models) {
        CAPTURE(to_token(fitted.kind));
        const SavedModel saved{fitted.kind, fitted.model, 0.5};
        const auto path = scratch(std::string(to_token(fitted.kind)) + ".json");
        save_model(path, saved);
        const auto loaded = load_model(path);
        CHECK(loaded.kind == fitted.kind);
        CHECK(loaded.model.parameters() == fitted.model.parameters());

        const auto grid = emit_curves(result).delay_ms;
        const std::vector<double> x(grid.data(), grid.data() + grid.size());
        CHECK(predict_prob(loaded.model, build_clamped_design(loaded.model.basis, x)) ==
              predict_prob(fitted.model, build_clamped_design(fitted.model.basis, x)));
        CHECK(serialize_model(loaded) == serialize_model(saved));
    }
}

TEST_CASE("corrupt model files") {
    ExperimentConfig config;
    config.models = {ModelKind::CubicSpline};
    const auto result = run_experiment(config);
    const auto text = serialize_model({ModelKind::CubicSpline, result.models[0].model, 0.5});
    CHECK_THROWS_AS(deserialize_model(text.substr(0, text.size() / 2)), ModelLoadError);
    CHECK_THROWS_AS(deserialize_model(""), ModelLoadError);

    auto j = nlohmann::json::parse(text);
    j["version"] = 2;
    CHECK_THROWS_AS(deserialize_model(j.dump()), ModelLoadError);
    j = nlohmann::json::parse(text);
    j["coefficients"].erase(0);
    CHECK_THROWS_AS(deserialize_model(j.dump()), ModelLoadError);
    j = nlohmann::json::parse(text);
    j["format"] = "other";
    CHECK_THROWS_AS(deserialize_model(j.dump()), ModelLoadError);
    CHECK_THROWS_AS(load_model(scratch("does_not_exist.json")), ModelLoadError);
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("experiment --models svm") == 1);
    CHECK(run_cli("experiment --split-ratio 2") == 1);
    CHECK(run_cli("experiment --no-such-flag") == 1);

    const auto bad = scratch("bad.csv");
    {
        std::ofstream out(bad);
        out << "packet_delay_ms,packets_dropped,transfer_interval_ms,congested,attack_type,label\n"
            << "-5,0,100,0,none,0\n";
    }
    CHECK(run_cli("experiment --data \"" + bad.string() + "\"") == 2);
    CHECK(run_cli("experiment --data \"" + scratch("missing.csv").string() + "\"") == 2);

    const auto data = scratch("ok.csv");
    CHECK(run_cli("simulate --records 200 --seed 5 --out \"" + data.string() + "\"") == 0);
    CHECK(read_csv(data).size() == 200);
    CHECK(run_cli("experiment --models logistic --data \"" + data.string() + "\"") == 0);
}

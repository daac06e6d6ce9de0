#include "splineids/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "splineids/errors.hpp"
#include "splineids/random.hpp"

namespace splineids {

namespace {

constexpr std::array<std::string_view, 5> kModelTokens{"logistic", "linear", "quadratic", "cubic", "bspline"};
constexpr std::array<std::string_view, 5> kModelNames{"Logistic Regression", "Linear Spline", "Quadratic Spline",
                                                      "Cubic Spline", "B-Spline"};
constexpr std::array<std::string_view, 3> kFilterTokens{"all", "congested", "free"};

std::vector<std::string_view> split_csv(std::string_view s) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto comma = s.find(',');
        auto part = s.substr(0, comma);
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
        parts.push_back(part);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return parts;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string config_digest(const ExperimentConfig& config, const std::vector<TrafficRecord>& records,
                          const KnotVectord& knots, std::pair<double, double> domain) {
    nlohmann::json j;
    j["split_ratio"] = config.split_ratio;
    j["split_seed"] = config.split_seed;
    j["knot_probs"] = config.knot_probs;
    std::vector<std::string> models;
    for (auto m : config.models) models.emplace_back(to_token(m));
    j["models"] = models;
    j["threshold"] = config.threshold;
    j["bspline_degree"] = config.bspline_degree;
    j["filter"] = std::string(to_token(config.filter));
    j["knots"] = knots.to_std();
    j["domain"] = {domain.first, domain.second};

    std::ostringstream data;
    write_csv(data, records);
    j["data"] = fnv1a_hex(data.str());
    return fnv1a_hex(j.dump());
}

}  // namespace

std::string_view to_token(ModelKind kind) { return kModelTokens[static_cast<std::size_t>(kind)]; }
std::string_view display_name(ModelKind kind) { return kModelNames[static_cast<std::size_t>(kind)]; }

ModelKind model_kind_from_token(std::string_view token) {
    for (std::size_t i = 0; i < kModelTokens.size(); ++i)
        if (kModelTokens[i] == token) return static_cast<ModelKind>(i);
    throw ConfigError("unknown model '" + std::string(token) + "'");
}

std::vector<ModelKind> parse_model_list(std::string_view csv) {
    if (csv == "all") return {kAllModels.begin(), kAllModels.end()};
    std::vector<ModelKind> out;
    for (auto token : split_csv(csv)) {
        const ModelKind kind = model_kind_from_token(token);
        if (std::find(out.begin(), out.end(), kind) != out.end())
            throw ConfigError("model '" + std::string(token) + "' listed twice");
        out.push_back(kind);
    }
    return out;
}

std::vector<double> parse_probability_list(std::string_view csv) {
    std::vector<double> out;
    for (auto token : split_csv(csv)) {
        std::string s(token);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) throw ConfigError("knots: '" + s + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::string_view to_token(CongestionFilter filter) { return kFilterTokens[static_cast<std::size_t>(filter)]; }

CongestionFilter congestion_filter_from_token(std::string_view token) {
    for (std::size_t i = 0; i < kFilterTokens.size(); ++i)
        if (kFilterTokens[i] == token) return static_cast<CongestionFilter>(i);
    throw ConfigError("unknown congestion filter '" + std::string(token) + "'");
}

void ExperimentConfig::validate() const {
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("split_ratio must lie strictly inside (0, 1)");
    if (knot_probs.empty()) throw ConfigError("knots: at least one knot probability is required");
    for (std::size_t i = 0; i < knot_probs.size(); ++i) {
        if (!(knot_probs[i] > 0.0 && knot_probs[i] < 1.0))
            throw ConfigError("knots: probabilities must lie strictly inside (0, 1)");
        if (i > 0 && !(knot_probs[i] > knot_probs[i - 1]))
            throw ConfigError("knots: probabilities must be strictly increasing");
    }
    if (models.empty()) throw ConfigError("models: at least one model is required");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie strictly inside (0, 1)");
    if (bspline_degree < 1 || bspline_degree > 3) throw ConfigError("bspline_degree must be 1, 2 or 3");
    if (scenario) scenario->validate();
}

std::vector<TrafficRecord> load_records(const ExperimentConfig& config) {
    std::vector<TrafficRecord> records = config.data_path
                                             ? read_csv(*config.data_path)
                                             : generate_dataset(config.scenario.value_or(ScenarioConfig::defaults()));
    if (config.filter != CongestionFilter::All) {
        const bool keep_congested = config.filter == CongestionFilter::Congested;
        std::erase_if(records, [&](const TrafficRecord& r) { return r.congested != keep_congested; });
    }
    return records;
}

std::pair<std::vector<TrafficRecord>, std::vector<TrafficRecord>> split_train_test(
    const std::vector<TrafficRecord>& records, double ratio, std::uint64_t seed) {
    if (records.size() < 2) throw SplitError("need at least two records to split");
    if (!(ratio > 0.0 && ratio < 1.0)) throw SplitError("ratio must lie strictly inside (0, 1)");
    const auto n = records.size();
    const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    if (n_train == 0) throw SplitError("training side would be empty");
    if (n_train >= n) throw SplitError("test side would be empty");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

    std::pair<std::vector<TrafficRecord>, std::vector<TrafficRecord>> out;
    out.first.reserve(n_train);
    out.second.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) (i < n_train ? out.first : out.second).push_back(records[order[i]]);
    return out;
}

std::vector<double> packet_delays(const std::vector<TrafficRecord>& records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.packet_delay_ms);
    return out;
}

std::vector<int> labels(const std::vector<TrafficRecord>& records) {
    std::vector<int> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.label);
    return out;
}

std::pair<double, double> expanded_domain(std::span<const double> train_delays) {
    if (train_delays.empty()) throw EmptyData("no training delays");
    const auto [lo, hi] = std::minmax_element(train_delays.begin(), train_delays.end());
    const double pad = 0.01 * (*hi - *lo);
    if (!(pad > 0.0)) throw DegenerateKnots("training delays have zero spread");
    return {*lo - pad, *hi + pad};
}

std::optional<SplineBasisSpecd> basis_for(ModelKind kind, const KnotVectord& knots, std::pair<double, double> domain,
                                          int bspline_degree) {
    switch (kind) {
        case ModelKind::Logistic: return std::nullopt;
        case ModelKind::LinearSpline: return SplineBasisSpecd::truncated_power(1, knots, domain);
        case ModelKind::QuadraticSpline: return SplineBasisSpecd::truncated_power(2, knots, domain);
        case ModelKind::CubicSpline: return SplineBasisSpecd::truncated_power(3, knots, domain);
        case ModelKind::BSpline: return SplineBasisSpecd::bspline(bspline_degree, knots, domain);
    }
    throw ConfigError("unhandled model kind");
}

double clamp_to_basis(const std::optional<SplineBasisSpecd>& basis, double x) {
    if (!basis || basis->kind() != BasisKind::BSpline) return x;
    return std::clamp(x, basis->domain().first, basis->domain().second);
}

DesignMatrix build_clamped_design(const std::optional<SplineBasisSpecd>& basis, std::span<const double> x,
                                  std::size_t* clamped) {
    std::vector<double> xs(x.begin(), x.end());
    std::size_t count = 0;
    for (auto& v : xs) {
        const double c = clamp_to_basis(basis, v);
        if (c != v) ++count;
        v = c;
    }
    if (clamped) *clamped = count;
    return build_design_matrix(basis, xs);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_experiment(config, load_records(config));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::vector<TrafficRecord>& records) {
    config.validate();
    const auto [train, test] = split_train_test(records, config.split_ratio, config.split_seed);

    const std::vector<double> train_x = packet_delays(train);
    const std::vector<double> test_x = packet_delays(test);
    const std::vector<int> train_y = labels(train);
    const std::vector<int> test_y = labels(test);

    ExperimentResult result{{}, {}, quantile_knots(train_x, config.knot_probs), expanded_domain(train_x)};

    // Fits are independent given the shared split; rows are assembled in
    // the requested order regardless of completion order.
    struct Job {
        FittedModel fitted;
        DesignMatrix test_dm;
        std::size_t clamped = 0;
    };
    std::vector<std::future<Job>> jobs;
    for (ModelKind kind : config.models) {
        jobs.push_back(std::async(std::launch::async, [&, kind] {
            const auto basis = basis_for(kind, result.knots, result.domain, config.bspline_degree);
            Job job{{kind, fit_logistic(build_design_matrix(basis, train_x), train_y)}, {}, 0};
            job.test_dm = build_clamped_design(basis, test_x, &job.clamped);
            return job;
        }));
    }

    ExperimentReport& report = result.report;
    report.n_train = train.size();
    report.n_test = test.size();
    report.knots = result.knots.to_std();
    if (!config.data_path) report.scenario_seed = config.scenario.value_or(ScenarioConfig::defaults()).seed;
    report.split_seed = config.split_seed;

    for (auto& pending : jobs) {
        Job job = pending.get();
        const auto predicted = classify(predict_prob(job.fitted.model, job.test_dm), config.threshold);
        ModelRow row{job.fitted.kind, confusion_matrix(predicted, test_y), 0.0, job.fitted.model.converged,
                     job.fitted.model.separation_flag, job.fitted.model.iterations};
        row.accuracy = accuracy(row.cm);
        report.rows.push_back(row);
        report.clamped_test_points = std::max(report.clamped_test_points, job.clamped);
        result.models.push_back(std::move(job.fitted));
    }
    report.digest = config_digest(config, records, result.knots, result.domain);
    return result;
}

ReportFormat report_format_from_token(std::string_view token) {
    if (token == "text") return ReportFormat::Text;
    if (token == "csv") return ReportFormat::Csv;
    throw ConfigError("unknown report format '" + std::string(token) + "'");
}

std::string format_percent(double acc) { return format_fixed(100.0 * acc, 2) + "%"; }

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Csv) {
        out << "model,tp,fp,tn,fn,n,accuracy_pct,converged,separation,iterations\n";
        for (const auto& row : report.rows) {
            out << to_token(row.kind) << ',' << row.cm.tp << ',' << row.cm.fp << ',' << row.cm.tn << ','
                << row.cm.fn << ',' << row.cm.total() << ',' << format_fixed(100.0 * row.accuracy, 2) << ','
                << (row.converged ? 1 : 0) << ',' << (row.separation ? 1 : 0) << ',' << row.iterations << '\n';
        }
        return;
    }

    out << "Confusion matrix analysis for logistic and spline regressions\n";
    out << "N = " << report.n_test << " test observations (" << report.n_train << " training)\n";
    out << "Knots (ms):";
    for (std::size_t i = 0; i < report.knots.size(); ++i) out << (i ? ", " : " ") << format_fixed(report.knots[i], 4);
    out << "\n\n";

    out << std::left << std::setw(22) << "Model" << std::right << std::setw(6) << "TP" << std::setw(6) << "FP"
        << std::setw(6) << "TN" << std::setw(6) << "FN" << std::setw(22) << "Prediction Accuracy"
        << "  Fit\n";
    for (const auto& row : report.rows) {
        std::string fit = row.separation ? "separated" : (row.converged ? "converged" : "max-iter");
        fit += " (" + std::to_string(row.iterations) + " it)";
        out << std::left << std::setw(22) << display_name(row.kind) << std::right << std::setw(6) << row.cm.tp
            << std::setw(6) << row.cm.fp << std::setw(6) << row.cm.tn << std::setw(6) << row.cm.fn
            << std::setw(22) << format_percent(row.accuracy) << "  " << fit << '\n';
    }
    out << '\n';
    if (report.scenario_seed) out << "Scenario seed: " << *report.scenario_seed << '\n';
    out << "Split seed: " << report.split_seed << '\n';
    out << "Config digest: " << report.digest << '\n';
    out << "Test points clamped to the B-spline domain: " << report.clamped_test_points << '\n';
    out << "Note: accuracy is (TP + TN) / N from the counts shown, rounded to two decimals; "
        << "118 of 120 is " << format_percent(118.0 / 120.0) << ", not 98.30%.\n";
}

CurveTable emit_curves(const ExperimentResult& result, int grid_points) {
    if (grid_points < 2) throw ConfigError("grid must have at least two points");
    CurveTable table;
    table.digest = result.report.digest;
    table.delay_ms = Eigen::VectorXd::LinSpaced(grid_points, result.domain.first, result.domain.second);
    table.probability.resize(grid_points, static_cast<Eigen::Index>(result.models.size()));
    const std::vector<double> grid(table.delay_ms.data(), table.delay_ms.data() + grid_points);
    for (std::size_t m = 0; m < result.models.size(); ++m) {
        const auto& fitted = result.models[m];
        table.models.push_back(fitted.kind);
        table.probability.col(static_cast<Eigen::Index>(m)) =
            predict_prob(fitted.model, build_clamped_design(fitted.model.basis, grid));
    }
    return table;
}

void write_curves_csv(const CurveTable& table, std::ostream& out) {
    out << "delay_ms";
    for (auto kind : table.models) out << ',' << to_token(kind);
    out << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < table.delay_ms.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", table.delay_ms[i]);
        out << buf;
        for (Eigen::Index m = 0; m < table.probability.cols(); ++m) {
            std::snprintf(buf, sizeof buf, "%.17g", table.probability(i, m));
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace splineids

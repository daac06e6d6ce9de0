#ifndef SPLINEIDS_PIPELINE_HPP
#define SPLINEIDS_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "splineids/classifier.hpp"
#include "splineids/knots.hpp"
#include "splineids/vanet_sim.hpp"

namespace splineids {

enum class ModelKind { Logistic, LinearSpline, QuadraticSpline, CubicSpline, BSpline };

inline constexpr std::array<ModelKind, 5> kAllModels{ModelKind::Logistic, ModelKind::LinearSpline,
                                                     ModelKind::QuadraticSpline, ModelKind::CubicSpline,
                                                     ModelKind::BSpline};

std::string_view to_token(ModelKind kind);         // "logistic", "linear", ...
std::string_view display_name(ModelKind kind);     // "Logistic Regression", ...
ModelKind model_kind_from_token(std::string_view token);
std::vector<ModelKind> parse_model_list(std::string_view csv);
std::vector<double> parse_probability_list(std::string_view csv);

enum class CongestionFilter { All, Congested, Free };
std::string_view to_token(CongestionFilter filter);
CongestionFilter congestion_filter_from_token(std::string_view token);

struct ExperimentConfig {
    std::optional<std::filesystem::path> data_path;  // takes precedence over `scenario`
    std::optional<ScenarioConfig> scenario;          // default scenario when neither is set
    double split_ratio = 0.8;
    std::uint64_t split_seed = 42;
    std::vector<double> knot_probs{0.25, 0.50, 0.75};
    std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
    double threshold = 0.5;
    int bspline_degree = 3;
    CongestionFilter filter = CongestionFilter::All;

    void validate() const;  // throws ConfigError
};

/// Loads the CSV or generates the scenario named by `config`, then filters.
std::vector<TrafficRecord> load_records(const ExperimentConfig& config);

/// Seeded Fisher-Yates shuffle, then the first round(ratio * n) records train.
std::pair<std::vector<TrafficRecord>, std::vector<TrafficRecord>> split_train_test(
    const std::vector<TrafficRecord>& records, double ratio, std::uint64_t seed);

std::vector<double> packet_delays(const std::vector<TrafficRecord>& records);
std::vector<int> labels(const std::vector<TrafficRecord>& records);

/// Training delay range widened by 1% of its width on each side.
std::pair<double, double> expanded_domain(std::span<const double> train_delays);

/// None for the logistic baseline; truncated-power bases of degree 1/2/3
/// for the linear/quadratic/cubic splines; a clamped B-spline otherwise.
std::optional<SplineBasisSpecd> basis_for(ModelKind kind, const KnotVectord& knots, std::pair<double, double> domain,
                                          int bspline_degree);

struct ModelRow {
    ModelKind kind;
    ConfusionMatrix cm;
    double accuracy = 0.0;
    bool converged = false;
    bool separation = false;
    int iterations = 0;
};

struct ExperimentReport {
    std::vector<ModelRow> rows;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::vector<double> knots;
    std::optional<std::uint64_t> scenario_seed;
    std::uint64_t split_seed = 0;
    std::size_t clamped_test_points = 0;
    std::string digest;
};

struct FittedModel {
    ModelKind kind;
    LogisticModel model;
};

struct ExperimentResult {
    ExperimentReport report;
    std::vector<FittedModel> models;
    KnotVectord knots;
    std::pair<double, double> domain;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, const std::vector<TrafficRecord>& records);

enum class ReportFormat { Text, Csv };
ReportFormat report_format_from_token(std::string_view token);

std::string format_percent(double accuracy);  // "99.17%"
void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out);

struct CurveTable {
    std::string digest;
    std::vector<ModelKind> models;
    Eigen::VectorXd delay_ms;
    Eigen::MatrixXd probability;  // one column per model
};

/// Predicted attack probability of every fitted model over an even grid
/// spanning the B-spline domain of the run.
CurveTable emit_curves(const ExperimentResult& result, int grid_points = 200);
void write_curves_csv(const CurveTable& table, std::ostream& out);

/// Delay clamped into the basis domain when the basis restricts it.
double clamp_to_basis(const std::optional<SplineBasisSpecd>& basis, double x);

/// Design matrix for possibly out-of-domain inputs; counts clamped values.
DesignMatrix build_clamped_design(const std::optional<SplineBasisSpecd>& basis, std::span<const double> x,
                                  std::size_t* clamped = nullptr);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace splineids

#endif  // SPLINEIDS_PIPELINE_HPP

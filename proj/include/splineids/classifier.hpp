#ifndef SPLINEIDS_CLASSIFIER_HPP
#define SPLINEIDS_CLASSIFIER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "splineids/basis.hpp"

namespace splineids {

/// Rows (1, basis_row(spec, x_i)); with no spec the single feature is x itself.
struct DesignMatrix {
    Eigen::MatrixXd values;
    std::optional<SplineBasisSpecd> basis;

    Eigen::Index rows() const noexcept { return values.rows(); }
    Eigen::Index cols() const noexcept { return values.cols(); }
};

/// Throws OutOfDomain carrying the row index when a B-spline row is
/// requested outside its domain.
DesignMatrix build_design_matrix(const std::optional<SplineBasisSpecd>& spec, std::span<const double> x);

struct IrlsOptions {
    double tolerance = 1e-8;       // on |change in log-likelihood|
    int max_iterations = 50;
    double ridge = 1e-8;           // jitter added once when the normal equations are singular
    double probability_band = 1e-12;
};

struct LogisticModel {
    double intercept = 0.0;
    Eigen::VectorXd coefficients;
    std::optional<SplineBasisSpecd> basis;
    bool converged = false;
    int iterations = 0;
    bool separation_flag = false;
    double log_likelihood = 0.0;
    std::vector<double> log_likelihood_trace;  // one entry per accepted iterate, starting at zero coefficients

    Eigen::VectorXd parameters() const;  // (intercept, coefficients...)
    Eigen::Index dimension() const noexcept { return coefficients.size() + 1; }
};

/**
 * Maximum-likelihood logistic fit by iteratively reweighted least squares.
 *
 * Each Newton step is a weighted least-squares solve on column-equilibrated
 * design columns. A step that would lower the log-likelihood is halved
 * until it does not, so the accepted trace is nondecreasing. Iteration
 * stops when the log-likelihood changes by less than `tolerance`, after
 * `max_iterations`, or as soon as a fitted probability leaves
 * (band, 1 - band); the last case, and single-class labels, set
 * `separation_flag`.
 */
LogisticModel fit_logistic(const DesignMatrix& dm, std::span<const int> labels, const IrlsOptions& options = {});

double log_likelihood(const DesignMatrix& dm, std::span<const int> labels, const Eigen::VectorXd& parameters);
Eigen::VectorXd log_likelihood_gradient(const DesignMatrix& dm, std::span<const int> labels,
                                        const Eigen::VectorXd& parameters);

/// Logistic function, evaluated without overflow.
double sigmoid(double eta) noexcept;

/// Probabilities are kept strictly inside (0, 1).
Eigen::VectorXd predict_prob(const LogisticModel& model, const DesignMatrix& dm);

std::vector<int> classify(const Eigen::VectorXd& probs, double threshold = 0.5);

/// Attack (label 1) is the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> actual);

double accuracy(const ConfusionMatrix& cm);

}  // namespace splineids

#endif  // SPLINEIDS_CLASSIFIER_HPP

#include "splineids/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace splineids {

namespace {

constexpr double kProbFloor = 0x1p-53;
constexpr double kProbCeil = 1.0 - 0x1p-53;

void check_labels(const DesignMatrix& dm, std::span<const int> labels) {
    if (static_cast<Eigen::Index>(labels.size()) != dm.rows())
        throw ShapeError("label count " + std::to_string(labels.size()) + " does not match " +
                         std::to_string(dm.rows()) + " design rows");
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0 && labels[i] != 1)
            throw ShapeError("label at row " + std::to_string(i) + " is not 0 or 1");
}

void check_parameters(const DesignMatrix& dm, const Eigen::VectorXd& parameters) {
    if (parameters.size() != dm.cols())
        throw ShapeError("parameter length " + std::to_string(parameters.size()) + " does not match " +
                         std::to_string(dm.cols()) + " design columns");
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta) { return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta))); }

double log_likelihood_from_eta(const Eigen::VectorXd& eta, std::span<const int> labels) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += labels[i] * eta[i] - softplus(eta[i]);
    return ll;
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& eta) {
    return eta.unaryExpr([](double e) { return splineids::sigmoid(e); });
}

}  // namespace

DesignMatrix build_design_matrix(const std::optional<SplineBasisSpecd>& spec, std::span<const double> x) {
    if (x.empty()) throw EmptyData("design matrix needs at least one observation");
    const auto n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index width = 1 + (spec ? spec->dimension() : 1);

    DesignMatrix dm{Eigen::MatrixXd(n, width), spec};
    dm.values.col(0).setOnes();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        if (!std::isfinite(xi)) throw OutOfDomain("non-finite predictor value", static_cast<std::size_t>(i));
        if (!spec) {
            dm.values(i, 1) = xi;
            continue;
        }
        if (spec->kind() == BasisKind::BSpline && !spec->contains(xi))
            throw OutOfDomain("x = " + std::to_string(xi) + " outside B-spline domain",
                              static_cast<std::size_t>(i));
        dm.values.row(i).tail(width - 1) = basis_row(*spec, xi).transpose();
    }
    return dm;
}

Eigen::VectorXd LogisticModel::parameters() const {
    Eigen::VectorXd beta(dimension());
    beta[0] = intercept;
    beta.tail(coefficients.size()) = coefficients;
    return beta;
}

double sigmoid(double eta) noexcept {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double log_likelihood(const DesignMatrix& dm, std::span<const int> labels, const Eigen::VectorXd& parameters) {
    check_labels(dm, labels);
    check_parameters(dm, parameters);
    return log_likelihood_from_eta(dm.values * parameters, labels);
}

Eigen::VectorXd log_likelihood_gradient(const DesignMatrix& dm, std::span<const int> labels,
                                        const Eigen::VectorXd& parameters) {
    check_labels(dm, labels);
    check_parameters(dm, parameters);
    const Eigen::VectorXd p = sigmoid(Eigen::VectorXd(dm.values * parameters));
    Eigen::VectorXd y(dm.rows());
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = labels[i];
    return dm.values.transpose() * (y - p);
}

LogisticModel fit_logistic(const DesignMatrix& dm, std::span<const int> labels, const IrlsOptions& options) {
    check_labels(dm, labels);
    if (dm.rows() == 0) throw EmptyData("cannot fit on zero observations");
    const Eigen::Index n = dm.rows();
    const Eigen::Index p = dm.cols();
    const Eigen::MatrixXd& X = dm.values;

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = labels[i];
    const double positives = y.sum();

    // Column equilibration keeps raw-scale polynomial columns (x^3 of a delay
    // in milliseconds) from swamping the intercept in the solve.
    Eigen::VectorXd scale = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < p; ++j)
        if (scale[j] == 0.0) scale[j] = 1.0;
    const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();

    LogisticModel model;
    model.basis = dm.basis;
    model.separation_flag = positives == 0.0 || positives == static_cast<double>(n);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd prob = sigmoid(eta);
    double ll = log_likelihood_from_eta(eta, labels);
    model.log_likelihood_trace.push_back(ll);

    const auto outside_band = [&](const Eigen::VectorXd& pr) {
        return (pr.array() <= options.probability_band).any() ||
               (pr.array() >= 1.0 - options.probability_band).any();
    };

    int iteration = 0;
    while (iteration < options.max_iterations) {
        ++iteration;
        const Eigen::ArrayXd w = (prob.array() * (1.0 - prob.array())).max(std::numeric_limits<double>::min());
        const Eigen::ArrayXd sqrt_w = w.sqrt();
        const Eigen::MatrixXd A = sqrt_w.matrix().asDiagonal() * Xs;
        const Eigen::VectorXd r = ((y - prob).array() / sqrt_w).matrix();

        Eigen::VectorXd step_scaled;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        if (qr.rank() == p) {
            step_scaled = qr.solve(r);
        } else {
            const Eigen::MatrixXd normal =
                A.transpose() * A + options.ridge * Eigen::MatrixXd::Identity(p, p);
            Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
                throw NumericalError("weighted normal equations singular even after ridge jitter");
            step_scaled = ldlt.solve(A.transpose() * r);
        }
        const Eigen::VectorXd step = step_scaled.cwiseQuotient(scale);
        if (!step.allFinite()) throw NumericalError("non-finite IRLS step");

        // Step halving keeps the accepted log-likelihood sequence monotone.
        double length = 1.0;
        bool accepted = false;
        Eigen::VectorXd candidate, cand_eta;
        double cand_ll = ll;
        for (int halving = 0; halving < 40; ++halving, length *= 0.5) {
            candidate = beta + length * step;
            cand_eta = X * candidate;
            cand_ll = log_likelihood_from_eta(cand_eta, labels);
            if (cand_ll >= ll) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No ascent direction left at working precision.
            model.converged = true;
            break;
        }

        const double delta = cand_ll - ll;
        beta = candidate;
        eta = cand_eta;
        prob = sigmoid(eta);
        ll = cand_ll;
        model.log_likelihood_trace.push_back(ll);

        if (outside_band(prob)) {
            model.separation_flag = true;
            break;
        }
        if (std::abs(delta) < options.tolerance) {
            model.converged = true;
            break;
        }
    }

    model.iterations = iteration;
    model.intercept = beta[0];
    model.coefficients = beta.tail(p - 1);
    model.log_likelihood = ll;
    return model;
}

Eigen::VectorXd predict_prob(const LogisticModel& model, const DesignMatrix& dm) {
    if (dm.cols() != model.dimension())
        throw ShapeError("design has " + std::to_string(dm.cols()) + " columns, model expects " +
                         std::to_string(model.dimension()));
    const Eigen::VectorXd eta = dm.values * model.parameters();
    return sigmoid(eta).cwiseMax(kProbFloor).cwiseMin(kProbCeil);
}

std::vector<int> classify(const Eigen::VectorXd& probs, double threshold) {
    std::vector<int> out(static_cast<std::size_t>(probs.size()));
    for (Eigen::Index i = 0; i < probs.size(); ++i) out[static_cast<std::size_t>(i)] = probs[i] >= threshold ? 1 : 0;
    return out;
}

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size())
        throw ShapeError("predicted and actual lengths differ (" + std::to_string(predicted.size()) + " vs " +
                         std::to_string(actual.size()) + ")");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const int p = predicted[i];
        const int a = actual[i];
        if ((p != 0 && p != 1) || (a != 0 && a != 1))
            throw ShapeError("confusion matrix inputs must be 0 or 1 (index " + std::to_string(i) + ")");
        if (p == 1 && a == 1) ++cm.tp;
        else if (p == 1) ++cm.fp;
        else if (a == 0) ++cm.tn;
        else ++cm.fn;
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw EmptyData("accuracy of an empty confusion matrix");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

}  // namespace splineids

#ifndef SPLINEIDS_INTERPOLATION_HPP
#define SPLINEIDS_INTERPOLATION_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "splineids/errors.hpp"
#include "splineids/knots.hpp"

namespace splineids {

/// Interpolation nodes (x_i, y_i) with strictly increasing abscissae.
template <typename Scalar>
class InterpolationData {
public:
    InterpolationData(VectorX<Scalar> x, VectorX<Scalar> y) : x_(std::move(x)), y_(std::move(y)) {
        if (x_.size() != y_.size()) throw ShapeError("x and y lengths differ");
        if (x_.size() < 2) throw InsufficientData("interpolation needs at least two points");
        for (Eigen::Index i = 0; i < x_.size(); ++i) {
            if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
                throw InvalidAbscissae("non-finite value at node " + std::to_string(i));
            if (i > 0 && !(x_[i] > x_[i - 1]))
                throw InvalidAbscissae("abscissae must be strictly increasing");
        }
    }

    InterpolationData(std::initializer_list<std::pair<Scalar, Scalar>> points)
        : InterpolationData(unzip(points).first, unzip(points).second) {}

    Eigen::Index size() const noexcept { return x_.size(); }
    const VectorX<Scalar>& x() const noexcept { return x_; }
    const VectorX<Scalar>& y() const noexcept { return y_; }

private:
    static std::pair<VectorX<Scalar>, VectorX<Scalar>> unzip(
        std::initializer_list<std::pair<Scalar, Scalar>> points) {
        VectorX<Scalar> x(static_cast<Eigen::Index>(points.size()));
        VectorX<Scalar> y(x.size());
        Eigen::Index i = 0;
        for (const auto& [px, py] : points) {
            x[i] = px;
            y[i] = py;
            ++i;
        }
        return {std::move(x), std::move(y)};
    }

    VectorX<Scalar> x_;
    VectorX<Scalar> y_;
};

/**
 * Piecewise polynomial of degree <= 3 stored as one row (a, b, c, d) per
 * interval, meaning a + b x + c x^2 + d x^3 in the global variable x.
 * Unused high-order slots of lower-degree pieces hold zeros.
 */
template <typename Scalar>
class PiecewisePolynomial {
public:
    using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 4>;

    PiecewisePolynomial(KnotVector<Scalar> breakpoints, Coefficients coefficients, int degree)
        : breakpoints_(std::move(breakpoints)), coefficients_(std::move(coefficients)), degree_(degree) {
        if (degree_ < 1 || degree_ > 3) throw ConfigError("piecewise degree must be 1, 2 or 3");
        if (coefficients_.rows() != breakpoints_.size() - 1)
            throw ShapeError("need exactly one coefficient row per interval");
    }

    const KnotVector<Scalar>& breakpoints() const noexcept { return breakpoints_; }
    const Coefficients& coefficients() const noexcept { return coefficients_; }
    int degree() const noexcept { return degree_; }
    Eigen::Index pieces() const noexcept { return coefficients_.rows(); }

    /// Interval containing x; the last interval is closed on the right.
    Eigen::Index locate(Scalar x) const {
        const auto& bp = breakpoints_.values();
        if (!(x >= bp[0] && x <= bp[bp.size() - 1]))
            throw OutOfDomain("x = " + std::to_string(x) + " outside [" + std::to_string(bp[0]) + ", " +
                              std::to_string(bp[bp.size() - 1]) + "]");
        const auto* first = bp.data();
        const auto* last = bp.data() + bp.size();
        auto idx = static_cast<Eigen::Index>(std::upper_bound(first, last, x) - first) - 1;
        return std::min(idx, pieces() - 1);
    }

    /// Value of piece `i` (or its derivative of the given order) at x,
    /// without any domain check. Used for continuity checks at breakpoints.
    Scalar piece_value(Eigen::Index i, Scalar x, int derivative = 0) const {
        const Scalar a = coefficients_(i, 0), b = coefficients_(i, 1);
        const Scalar c = coefficients_(i, 2), d = coefficients_(i, 3);
        switch (derivative) {
            case 0: return a + x * (b + x * (c + x * d));
            case 1: return b + x * (Scalar(2) * c + Scalar(3) * d * x);
            case 2: return Scalar(2) * c + Scalar(6) * d * x;
            case 3: return Scalar(6) * d;
            default: return Scalar(0);
        }
    }

private:
    KnotVector<Scalar> breakpoints_;
    Coefficients coefficients_;
    int degree_;
};

template <typename Scalar>
Scalar eval_piecewise(const PiecewisePolynomial<Scalar>& poly, Scalar x) {
    return poly.piece_value(poly.locate(x), x);
}

template <typename Scalar>
Scalar eval_piecewise_derivative(const PiecewisePolynomial<Scalar>& poly, Scalar x, int order) {
    return poly.piece_value(poly.locate(x), x, order);
}

/// Piecewise-linear interpolant; g(x_i) = y_i at every node including the
/// right endpoint.
template <typename Scalar>
Scalar eval_linear_interpolant(const InterpolationData<Scalar>& data, Scalar x) {
    const auto& xs = data.x();
    const auto& ys = data.y();
    const Eigen::Index m = xs.size();
    if (!(x >= xs[0] && x <= xs[m - 1]))
        throw OutOfDomain("x = " + std::to_string(x) + " outside interpolation range");
    if (x == xs[m - 1]) return ys[m - 1];

    const auto* first = xs.data();
    const auto i = static_cast<Eigen::Index>(std::upper_bound(first, first + m, x) - first) - 1;
    if (x == xs[i]) return ys[i];
    const Scalar t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

namespace detail {

// Row of global coefficients for p(x) = s0 + s1 (x - x0) + s2 (x - x0)^2 + s3 (x - x0)^3.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, 4> shift_to_global(Scalar x0, Scalar s0, Scalar s1, Scalar s2, Scalar s3) {
    Eigen::Matrix<Scalar, 1, 4> row;
    row << s0 - s1 * x0 + s2 * x0 * x0 - s3 * x0 * x0 * x0,
        s1 - Scalar(2) * s2 * x0 + Scalar(3) * s3 * x0 * x0,
        s2 - Scalar(3) * s3 * x0,
        s3;
    return row;
}

}  // namespace detail

/**
 * C^1 quadratic interpolating spline.
 *
 * Interpolation at the nodes plus C^1 continuity leaves one free condition;
 * it is closed by requiring the last piece to be linear (c_n = 0). The
 * slopes are then determined by a backward sweep from the last interval:
 * with right-end slope D on [x_j, x_j+1], the local form
 * f_j + s (x - x_j) + q (x - x_j)^2 has q = (D - m_j) / h_j and s = 2 m_j - D,
 * where m_j is the secant slope.
 */
template <typename Scalar>
PiecewisePolynomial<Scalar> fit_quadratic_spline(const InterpolationData<Scalar>& data) {
    const Eigen::Index n_points = data.size();
    if (n_points < 3) throw InsufficientData("quadratic spline needs at least three points");
    const Eigen::Index n = n_points - 1;
    const auto& x = data.x();
    const auto& f = data.y();

    typename PiecewisePolynomial<Scalar>::Coefficients coef =
        PiecewisePolynomial<Scalar>::Coefficients::Zero(n, 4);

    const Scalar h_last = x[n] - x[n - 1];
    Scalar right_slope = (f[n] - f[n - 1]) / h_last;
    coef.row(n - 1) = detail::shift_to_global(x[n - 1], f[n - 1], right_slope, Scalar(0), Scalar(0));

    for (Eigen::Index j = n - 2; j >= 0; --j) {
        const Scalar h = x[j + 1] - x[j];
        const Scalar secant = (f[j + 1] - f[j]) / h;
        const Scalar q = (right_slope - secant) / h;
        const Scalar s = Scalar(2) * secant - right_slope;
        coef.row(j) = detail::shift_to_global(x[j], f[j], s, q, Scalar(0));
        right_slope = s;
    }
    return PiecewisePolynomial<Scalar>(KnotVector<Scalar>(x), std::move(coef), 2);
}

/**
 * Natural cubic interpolating spline (S'' = 0 at both ends).
 *
 * Solves the tridiagonal system for the interior second derivatives
 * (moments) M_1..M_n-1 with the Thomas algorithm, then expands each
 * interval to global coefficients.
 */
template <typename Scalar>
PiecewisePolynomial<Scalar> fit_natural_cubic_spline(const InterpolationData<Scalar>& data) {
    const Eigen::Index n_points = data.size();
    if (n_points < 3) throw InsufficientData("cubic spline needs at least three points");
    const Eigen::Index n = n_points - 1;
    const auto& x = data.x();
    const auto& f = data.y();

    VectorX<Scalar> h = x.tail(n) - x.head(n);
    VectorX<Scalar> moments = VectorX<Scalar>::Zero(n_points);

    // Interior equations i = 1..n-1:
    //   h_{i-1} M_{i-1} + 2 (h_{i-1} + h_i) M_i + h_i M_{i+1} = 6 (m_i - m_{i-1})
    const Eigen::Index m = n - 1;
    VectorX<Scalar> diag(m), upper(m), rhs(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index i = k + 1;
        diag[k] = Scalar(2) * (h[i - 1] + h[i]);
        upper[k] = h[i];
        rhs[k] = Scalar(6) * ((f[i + 1] - f[i]) / h[i] - (f[i] - f[i - 1]) / h[i - 1]);
    }
    for (Eigen::Index k = 1; k < m; ++k) {
        const Scalar w = h[k] / diag[k - 1];  // sub-diagonal entry of row k is h_k
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    for (Eigen::Index k = m - 1; k >= 0; --k) {
        const Scalar tail = (k + 1 < m) ? upper[k] * moments[k + 2] : Scalar(0);
        moments[k + 1] = (rhs[k] - tail) / diag[k];
    }

    typename PiecewisePolynomial<Scalar>::Coefficients coef(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar slope = (f[i + 1] - f[i]) / h[i] - h[i] * (Scalar(2) * moments[i] + moments[i + 1]) / Scalar(6);
        const Scalar curv = moments[i] / Scalar(2);
        const Scalar jerk = (moments[i + 1] - moments[i]) / (Scalar(6) * h[i]);
        coef.row(i) = detail::shift_to_global(x[i], f[i], slope, curv, jerk);
    }
    return PiecewisePolynomial<Scalar>(KnotVector<Scalar>(x), std::move(coef), 3);
}

using InterpolationDatad = InterpolationData<double>;
using PiecewisePolynomiald = PiecewisePolynomial<double>;

}  // namespace splineids

#endif  // SPLINEIDS_INTERPOLATION_HPP

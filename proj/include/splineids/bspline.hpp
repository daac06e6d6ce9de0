#ifndef SPLINEIDS_BSPLINE_HPP
#define SPLINEIDS_BSPLINE_HPP

#include <string>

#include <Eigen/Dense>

#include "splineids/errors.hpp"
#include "splineids/knots.hpp"

namespace splineids {

/**
 * Normalized B-spline blending functions N_{i,k} of a fixed order k over an
 * extended (nondecreasing) knot sequence t_0..t_{n+k}.
 *
 * A clamped basis repeats each domain boundary k times, so the functions
 * span every spline of degree k-1 on the domain and the basis interpolates
 * at both ends.
 */
template <typename Scalar>
class BSplineBasis {
public:
    BSplineBasis(int order, KnotVector<Scalar> extended_knots)
        : order_(order), knots_(std::move(extended_knots)) {
        if (order_ < 1) throw ConfigError("B-spline order must be at least 1");
        if (knots_.size() < order_ + 1)
            throw ShapeError("extended knot vector too short for order " + std::to_string(order_));
    }

    /// Clamped basis on [lo, hi] with the given strictly interior knots.
    static BSplineBasis clamped(int order, const KnotVector<Scalar>& interior, Scalar lo, Scalar hi) {
        if (order < 1) throw ConfigError("B-spline order must be at least 1");
        if (!(lo < hi)) throw InvalidAbscissae("B-spline domain must satisfy min < max");
        const Eigen::Index n_int = interior.empty() ? 0 : interior.size();
        for (Eigen::Index j = 0; j < n_int; ++j)
            if (!(interior[j] > lo && interior[j] < hi))
                throw InvalidAbscissae("interior knot " + std::to_string(interior[j]) +
                                       " not strictly inside the domain");
        if (n_int > 0 && !interior.is_strictly_increasing())
            throw InvalidAbscissae("interior knots must be strictly increasing");

        VectorX<Scalar> t(n_int + 2 * order);
        t.head(order).setConstant(lo);
        if (n_int > 0) t.segment(order, n_int) = interior.values();
        t.tail(order).setConstant(hi);
        return BSplineBasis(order, KnotVector<Scalar>(std::move(t)));
    }

    int order() const noexcept { return order_; }
    int degree() const noexcept { return order_ - 1; }
    const KnotVector<Scalar>& extended_knots() const noexcept { return knots_; }
    Eigen::Index n_functions() const noexcept { return knots_.size() - order_; }
    Eigen::Index n_functions(int order) const noexcept { return knots_.size() - order; }

    /// Domain on which the full-order functions form a partition of unity.
    Scalar domain_min() const { return knots_[order_ - 1]; }
    Scalar domain_max() const { return knots_[knots_.size() - order_]; }

private:
    int order_;
    KnotVector<Scalar> knots_;
};

namespace detail {

template <typename Scalar>
Scalar safe_ratio(Scalar num, Scalar den) {
    return den == Scalar(0) ? Scalar(0) : num / den;
}

// Cox-de Boor recursion. With `closed_right`, the last nonempty span also
// contains its right endpoint, which gives the left limit at the end of the
// domain.
template <typename Scalar>
Scalar cox_de_boor(const VectorX<Scalar>& t, Eigen::Index i, int k, Scalar x, bool closed_right) {
    if (k == 1) {
        if (x >= t[i] && x < t[i + 1]) return Scalar(1);
        if (closed_right && x == t[i + 1] && t[i] < t[i + 1]) {
            // Only the final nonempty span closes on the right.
            for (Eigen::Index j = i + 2; j < t.size(); ++j)
                if (t[j] > t[i + 1]) return Scalar(0);
            return Scalar(1);
        }
        return Scalar(0);
    }
    const Scalar left = detail::safe_ratio(x - t[i], t[i + k - 1] - t[i]);
    const Scalar right = detail::safe_ratio(t[i + k] - x, t[i + k] - t[i + 1]);
    Scalar value = Scalar(0);
    if (left != Scalar(0)) value += left * cox_de_boor(t, i, k - 1, x, closed_right);
    if (right != Scalar(0)) value += right * cox_de_boor(t, i + 1, k - 1, x, closed_right);
    return value;
}

}  // namespace detail

/**
 * N_{i,k}(t) by the two-term recursion, with every term whose denominator
 * vanishes (repeated knots) taken as zero. The order-1 functions are the
 * half-open indicators of [t_i, t_{i+1}).
 */
template <typename Scalar>
Scalar bspline_blend(const BSplineBasis<Scalar>& basis, Eigen::Index i, int k, Scalar t) {
    if (k < 1) throw BadIndex("blending order must be at least 1");
    if (k > basis.extended_knots().size() - 1) throw BadIndex("blending order exceeds knot count");
    if (i < 0 || i >= basis.n_functions(k))
        throw BadIndex("function index " + std::to_string(i) + " out of range for order " + std::to_string(k));
    return detail::cox_de_boor(basis.extended_knots().values(), i, k, t, false);
}

/// All full-order functions at x; the right domain edge evaluates as its
/// left limit so that the row still sums to one there.
template <typename Scalar>
VectorX<Scalar> bspline_row(const BSplineBasis<Scalar>& basis, Scalar x) {
    if (!(x >= basis.domain_min() && x <= basis.domain_max()))
        throw OutOfDomain("x = " + std::to_string(x) + " outside B-spline domain [" +
                          std::to_string(basis.domain_min()) + ", " + std::to_string(basis.domain_max()) + "]");
    const auto& t = basis.extended_knots().values();
    VectorX<Scalar> row(basis.n_functions());
    for (Eigen::Index i = 0; i < row.size(); ++i)
        row[i] = detail::cox_de_boor(t, i, basis.order(), x, true);
    return row;
}

using BSplineBasisd = BSplineBasis<double>;

}  // namespace splineids

#endif  // SPLINEIDS_BSPLINE_HPP

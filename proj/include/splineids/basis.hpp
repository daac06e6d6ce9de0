#ifndef SPLINEIDS_BASIS_HPP
#define SPLINEIDS_BASIS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "splineids/bspline.hpp"
#include "splineids/errors.hpp"
#include "splineids/knots.hpp"

namespace splineids {

enum class BasisKind { TruncatedPower, BSpline };

inline std::string_view to_string(BasisKind kind) {
    return kind == BasisKind::TruncatedPower ? "truncated_power" : "bspline";
}

inline BasisKind basis_kind_from_string(std::string_view s) {
    if (s == "truncated_power") return BasisKind::TruncatedPower;
    if (s == "bspline") return BasisKind::BSpline;
    throw ConfigError("unknown basis kind '" + std::string(s) + "'");
}

/**
 * Regression basis over a single predictor, without the intercept.
 *
 *  - TruncatedPower, degree d, knots k_1..k_K:
 *      (x, x^2, ..., x^d, (x - k_1)_+^d, ..., (x - k_K)_+^d)
 *  - BSpline, degree d: the d+1 order clamped B-spline functions on
 *    `domain` with the interior knots, K + d + 1 columns.
 */
template <typename Scalar>
class SplineBasisSpec {
public:
    SplineBasisSpec(BasisKind kind, int degree, KnotVector<Scalar> interior_knots,
                    std::pair<Scalar, Scalar> domain)
        : kind_(kind), degree_(degree), knots_(std::move(interior_knots)), domain_(domain) {
        if (degree_ < 1 || degree_ > 3) throw ConfigError("spline degree must be 1, 2 or 3");
        if (!knots_.is_strictly_increasing())
            throw DegenerateKnots("interior knots must be strictly increasing");
        if (!(domain_.first < domain_.second)) throw InvalidAbscissae("domain must satisfy min < max");
        for (Eigen::Index i = 0; i < knots_.size(); ++i)
            if (!(knots_[i] > domain_.first && knots_[i] < domain_.second))
                throw InvalidAbscissae("interior knot " + std::to_string(knots_[i]) +
                                       " not strictly inside the domain");
        if (kind_ == BasisKind::BSpline)
            bspline_.emplace(BSplineBasis<Scalar>::clamped(degree_ + 1, knots_, domain_.first, domain_.second));
    }

    static SplineBasisSpec truncated_power(int degree, KnotVector<Scalar> knots, std::pair<Scalar, Scalar> domain) {
        return SplineBasisSpec(BasisKind::TruncatedPower, degree, std::move(knots), domain);
    }
    static SplineBasisSpec bspline(int degree, KnotVector<Scalar> knots, std::pair<Scalar, Scalar> domain) {
        return SplineBasisSpec(BasisKind::BSpline, degree, std::move(knots), domain);
    }

    BasisKind kind() const noexcept { return kind_; }
    int degree() const noexcept { return degree_; }
    const KnotVector<Scalar>& interior_knots() const noexcept { return knots_; }
    std::pair<Scalar, Scalar> domain() const noexcept { return domain_; }
    const std::optional<BSplineBasis<Scalar>>& bspline_basis() const noexcept { return bspline_; }

    Eigen::Index dimension() const noexcept {
        const Eigen::Index k = knots_.size();
        return kind_ == BasisKind::TruncatedPower ? degree_ + k : k + degree_ + 1;
    }

    bool contains(Scalar x) const noexcept { return x >= domain_.first && x <= domain_.second; }

    friend bool operator==(const SplineBasisSpec& a, const SplineBasisSpec& b) {
        return a.kind_ == b.kind_ && a.degree_ == b.degree_ && a.knots_ == b.knots_ && a.domain_ == b.domain_;
    }

private:
    BasisKind kind_;
    int degree_;
    KnotVector<Scalar> knots_;
    std::pair<Scalar, Scalar> domain_;
    std::optional<BSplineBasis<Scalar>> bspline_;
};

template <typename Scalar>
VectorX<Scalar> basis_row(const SplineBasisSpec<Scalar>& spec, Scalar x) {
    if (spec.kind() == BasisKind::BSpline) return bspline_row(*spec.bspline_basis(), x);

    const int d = spec.degree();
    const auto& knots = spec.interior_knots();
    VectorX<Scalar> row(spec.dimension());
    Scalar power = Scalar(1);
    for (int p = 0; p < d; ++p) {
        power *= x;
        row[p] = power;
    }
    for (Eigen::Index j = 0; j < knots.size(); ++j) {
        const Scalar hinge = x > knots[j] ? x - knots[j] : Scalar(0);
        Scalar term = hinge;
        for (int p = 1; p < d; ++p) term *= hinge;
        row[d + j] = term;
    }
    return row;
}

using SplineBasisSpecd = SplineBasisSpec<double>;

}  // namespace splineids

#endif  // SPLINEIDS_BASIS_HPP

#ifndef SPLINEIDS_KNOTS_HPP
#define SPLINEIDS_KNOTS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splineids/errors.hpp"

namespace splineids {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/**
 * Nondecreasing sequence of breakpoints, in the units of the predictor.
 *
 * Construction checks monotonicity; strict monotonicity is only required
 * where a knot vector is used as the interior knots of a regression basis,
 * see is_strictly_increasing().
 */
template <typename Scalar>
class KnotVector {
public:
    KnotVector() = default;

    explicit KnotVector(VectorX<Scalar> values) : values_(std::move(values)) {
        if (values_.size() < 1)
            throw EmptyData("knot vector needs at least one value");
        for (Eigen::Index i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw InvalidAbscissae("knot " + std::to_string(i) + " is not finite");
            if (i > 0 && values_[i] < values_[i - 1])
                throw InvalidAbscissae("knot vector must be nondecreasing");
        }
    }

    KnotVector(std::initializer_list<Scalar> values)
        : KnotVector(VectorX<Scalar>(Eigen::Map<const VectorX<Scalar>>(
              values.begin(), static_cast<Eigen::Index>(values.size())))) {}

    static KnotVector from(std::span<const Scalar> values) {
        return KnotVector(VectorX<Scalar>(Eigen::Map<const VectorX<Scalar>>(
            values.data(), static_cast<Eigen::Index>(values.size()))));
    }

    Eigen::Index size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.size() == 0; }
    Scalar operator[](Eigen::Index i) const { return values_[i]; }
    Scalar front() const { return values_[0]; }
    Scalar back() const { return values_[values_.size() - 1]; }
    const VectorX<Scalar>& values() const noexcept { return values_; }

    std::vector<Scalar> to_std() const { return {values_.data(), values_.data() + values_.size()}; }

    bool is_strictly_increasing() const {
        for (Eigen::Index i = 1; i < values_.size(); ++i)
            if (!(values_[i] > values_[i - 1])) return false;
        return true;
    }

    friend bool operator==(const KnotVector& a, const KnotVector& b) {
        return a.values_.size() == b.values_.size() && a.values_ == b.values_;
    }

private:
    VectorX<Scalar> values_;
};

/// Type-7 sample quantile: linear interpolation between order statistics
/// at h = (n - 1) p.
template <typename Scalar>
Scalar quantile(std::span<const Scalar> sample, Scalar p) {
    if (sample.empty()) throw EmptySample("quantile of an empty sample");
    if (!(p >= Scalar(0) && p <= Scalar(1)))
        throw ConfigError("quantile probability must lie in [0, 1]");

    std::vector<Scalar> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());

    const Scalar h = Scalar(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - Scalar(lo)) * (sorted[lo + 1] - sorted[lo]);
}

template <typename Scalar>
Scalar quantile(const std::vector<Scalar>& sample, Scalar p) {
    return quantile(std::span<const Scalar>(sample), p);
}

/// Knots at the given sample quantiles. Coinciding quantiles (a sample
/// with too little spread) raise DegenerateKnots.
template <typename Scalar>
KnotVector<Scalar> quantile_knots(std::span<const Scalar> sample, std::span<const Scalar> probs) {
    if (sample.empty()) throw EmptySample("cannot place knots on an empty sample");
    if (probs.empty()) throw ConfigError("at least one knot probability is required");
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] > Scalar(0) && probs[i] < Scalar(1)))
            throw ConfigError("knot probabilities must lie strictly inside (0, 1)");
        if (i > 0 && !(probs[i] > probs[i - 1]))
            throw ConfigError("knot probabilities must be strictly increasing");
    }

    std::vector<Scalar> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());

    VectorX<Scalar> knots(static_cast<Eigen::Index>(probs.size()));
    for (std::size_t i = 0; i < probs.size(); ++i) {
        knots[static_cast<Eigen::Index>(i)] = quantile(std::span<const Scalar>(sorted), probs[i]);
        if (i > 0 && !(knots[i] > knots[i - 1]))
            throw DegenerateKnots("quantiles " + std::to_string(probs[i - 1]) + " and " +
                                  std::to_string(probs[i]) + " coincide");
    }
    return KnotVector<Scalar>(std::move(knots));
}

template <typename Scalar>
KnotVector<Scalar> quantile_knots(const std::vector<Scalar>& sample, const std::vector<Scalar>& probs) {
    return quantile_knots(std::span<const Scalar>(sample), std::span<const Scalar>(probs));
}

using KnotVectord = KnotVector<double>;

}  // namespace splineids

#endif  // SPLINEIDS_KNOTS_HPP

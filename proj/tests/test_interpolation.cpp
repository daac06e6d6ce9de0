#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "splineids/interpolation.hpp"

using namespace splineids;

namespace {

InterpolationDatad random_nodes(std::mt19937_64& gen, int points) {
    std::uniform_real_distribution<double> gap(0.2, 2.0), value(-5.0, 5.0);
    Eigen::VectorXd x(points), y(points);
    x[0] = value(gen);
    for (int i = 1; i < points; ++i) x[i] = x[i - 1] + gap(gen);
    for (int i = 0; i < points; ++i) y[i] = value(gen);
    return {x, y};
}

// Maximum jump of the given derivative order across interior breakpoints.
double max_jump(const PiecewisePolynomiald& poly, int order) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i + 1 < poly.pieces(); ++i) {
        const double knot = poly.breakpoints()[i + 1];
        worst = std::max(worst, std::abs(poly.piece_value(i, knot, order) - poly.piece_value(i + 1, knot, order)));
    }
    return worst;
}

}  // namespace

TEST_CASE("linear interpolant") {
    const InterpolationDatad data{{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}};
    CHECK(eval_linear_interpolant(data, 0.5) == 1.0);
    CHECK(eval_linear_interpolant(data, 1.0) == 2.0);
    CHECK(eval_linear_interpolant(data, 2.0) == 0.0);
    CHECK(eval_linear_interpolant(data, 1.5) == 1.0);
    CHECK_THROWS_AS(eval_linear_interpolant(data, 2.0001), OutOfDomain);
    CHECK_THROWS_AS(eval_linear_interpolant(data, -0.1), OutOfDomain);
}

TEST_CASE("interpolation data validation") {
    CHECK_THROWS_AS(InterpolationDatad({{0.0, 1.0}}), InsufficientData);
    CHECK_THROWS_AS(InterpolationDatad({{0.0, 1.0}, {0.0, 2.0}, {1.0, 0.0}}), InvalidAbscissae);
    CHECK_THROWS_AS(InterpolationDatad({{1.0, 1.0}, {0.0, 2.0}}), InvalidAbscissae);
}

TEST_CASE("quadratic spline reproduces the worked example exactly") {
    const auto poly = fit_quadratic_spline(InterpolationDatad{{-1.0, 0.0}, {0.0, 1.0}, {1.0, 3.0}});
    REQUIRE(poly.pieces() == 2);
    CHECK(poly.degree() == 2);
    const auto& c = poly.coefficients();
    CHECK(c(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c(1, 2) == 0.0);
    CHECK(c.col(3).isZero(0.0));

    // 1 + 2(-0.5) + 0.25
    CHECK(eval_piecewise(poly, -0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(eval_piecewise(poly, -1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(eval_piecewise(poly, 1.5), OutOfDomain);
}

TEST_CASE("quadratic spline through collinear points is the line") {
    const auto poly = fit_quadratic_spline(InterpolationDatad{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}});
    for (Eigen::Index i = 0; i < poly.pieces(); ++i) {
        CHECK(poly.coefficients()(i, 0) == doctest::Approx(0.0));
        CHECK(poly.coefficients()(i, 1) == doctest::Approx(1.0));
        CHECK(poly.coefficients()(i, 2) == doctest::Approx(0.0));
    }
}

TEST_CASE("quadratic spline agrees with the dense linear-system oracle") {
    const InterpolationDatad data{{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}, {3.0, 9.0}};
    const auto poly = fit_quadratic_spline(data);
    const Eigen::MatrixXd expected = oracle::quadratic_spline(data.x(), data.y());
    // Frozen from the oracle: pieces (0,1,0), (2,-3,2), (-6,5,0).
    Eigen::MatrixXd frozen(3, 3);
    frozen << 0, 1, 0, 2, -3, 2, -6, 5, 0;
    CHECK((expected - frozen).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((poly.coefficients().leftCols(3) - expected).cwiseAbs().maxCoeff() < 1e-10);

    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = random_nodes(gen, 3 + static_cast<int>(gen() % 6));
        const auto p = fit_quadratic_spline(d);
        const Eigen::MatrixXd o = oracle::quadratic_spline(d.x(), d.y());
        const double scale = 1.0 + o.cwiseAbs().maxCoeff();
        CHECK((p.coefficients().leftCols(3) - o).cwiseAbs().maxCoeff() < 1e-8 * scale);
        CHECK(p.coefficients()(p.pieces() - 1, 2) == 0.0);
        CHECK(max_jump(p, 0) < 1e-9 * scale);
        CHECK(max_jump(p, 1) < 1e-9 * scale);
        for (Eigen::Index i = 0; i < d.size(); ++i) CHECK(std::abs(eval_piecewise(p, d.x()[i]) - d.y()[i]) < 1e-9);
    }
}

TEST_CASE("natural cubic spline hand-solved example") {
    const InterpolationDatad data{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};
    const auto poly = fit_natural_cubic_spline(data);
    CHECK(eval_piecewise(poly, 0.5) == doctest::Approx(0.6875).epsilon(1e-12));
    CHECK(eval_piecewise(poly, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval_piecewise(poly, 1.5) == doctest::Approx(0.6875).epsilon(1e-12));
    // Moment at the middle node is -3.
    CHECK(eval_piecewise_derivative(poly, 1.0, 2) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("natural cubic spline through collinear points is the line") {
    const auto poly = fit_natural_cubic_spline(InterpolationDatad{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}});
    CHECK(eval_piecewise(poly, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("natural cubic spline errors") {
    CHECK_THROWS_AS(fit_natural_cubic_spline(InterpolationDatad{{0.0, 0.0}, {1.0, 1.0}}), InsufficientData);
    CHECK_THROWS_AS(fit_quadratic_spline(InterpolationDatad{{0.0, 0.0}, {1.0, 1.0}}), InsufficientData);
}

TEST_CASE("natural cubic spline properties on random data") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = random_nodes(gen, 3 + static_cast<int>(gen() % 8));
        const auto p = fit_natural_cubic_spline(d);
        const Eigen::MatrixXd o = oracle::natural_cubic_spline(d.x(), d.y());
        const double scale = 1.0 + o.cwiseAbs().maxCoeff();
        CHECK((p.coefficients() - o).cwiseAbs().maxCoeff() < 1e-8 * scale);
        for (Eigen::Index i = 0; i < d.size(); ++i)
            CHECK(std::abs(eval_piecewise(p, d.x()[i]) - d.y()[i]) < 1e-9);
        CHECK(max_jump(p, 0) < 1e-9);
        CHECK(max_jump(p, 1) < 1e-9);
        CHECK(max_jump(p, 2) < 1e-9);
        CHECK(std::abs(p.piece_value(0, d.x()[0], 2)) < 1e-9);
        CHECK(std::abs(p.piece_value(p.pieces() - 1, d.x()[d.size() - 1], 2)) < 1e-9);
    }
}

TEST_CASE("piecewise evaluation uses the first piece at the first breakpoint") {
    const auto poly = fit_natural_cubic_spline(InterpolationDatad{{0.0, 1.0}, {1.0, 3.0}, {2.0, 2.0}, {3.0, 5.0}});
    CHECK(poly.locate(0.0) == 0);
    CHECK(poly.locate(3.0) == 2);
    CHECK(eval_piecewise(poly, 0.0) == poly.piece_value(0, 0.0));
    CHECK(eval_piecewise(poly, 3.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(eval_piecewise(poly, 3.0 + 1e-9), OutOfDomain);
}

TEST_CASE("piecewise polynomial shape checks") {
    PiecewisePolynomiald::Coefficients c = PiecewisePolynomiald::Coefficients::Zero(2, 4);
    CHECK_THROWS_AS(PiecewisePolynomiald(KnotVectord{0.0, 1.0}, c, 1), ShapeError);
    CHECK_THROWS_AS(PiecewisePolynomiald(KnotVectord{0.0, 1.0, 2.0}, c, 4), ConfigError);
}

TEST_CASE("float instantiation") {
    const InterpolationData<float> data{{0.0f, 0.0f}, {1.0f, 1.0f}, {2.0f, 0.0f}};
    CHECK(eval_piecewise(fit_natural_cubic_spline(data), 0.5f) == doctest::Approx(0.6875f).epsilon(1e-6));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include <mdiica/basis.hpp>

#include "oracle_helpers.hpp"

using namespace mdiica;

namespace {

const BasisId kAllIds[] = {BasisId::G1bar, BasisId::G2bar, BasisId::G0, BasisId::G1};

}  // namespace

TEST_CASE("closed-form values at zero") {
    const BasisEval g1bar = eval_basis(BasisId::G1bar, 0.0);
    CHECK(g1bar.value == 0.0);
    CHECK(g1bar.d1 == 1.0);
    CHECK(g1bar.d2 == 0.0);

    const BasisEval g2bar = eval_basis(BasisId::G2bar, 0.0);
    CHECK(g2bar.value == 1.0);
    CHECK(g2bar.d1 == 0.0);
    CHECK(g2bar.d2 == -1.0);
}

TEST_CASE("log cosh derivatives at y = 2") {
    const BasisEval g = eval_basis(BasisId::G1, 2.0);
    CHECK(g.d1 == doctest::Approx(0.9640275800758169).epsilon(1e-12));
    CHECK(g.d2 == doctest::Approx(0.0706508248531645).epsilon(1e-9));
    CHECK(g.value == doctest::Approx(std::log(std::cosh(2.0))).epsilon(1e-12));
}

TEST_CASE("derivatives match central finite differences on the working range") {
    for (BasisId id : kAllIds) {
        for (double y = -5.0; y <= 5.0; y += 0.37) {
            const BasisEval e = eval_basis(id, y);
            const double d1 = oracle::central_diff(
                [&](double t) { return eval_basis(id, t).value; }, y);
            const double d2 = oracle::central_diff(
                [&](double t) { return eval_basis(id, t).d1; }, y);
            const double scale1 = std::max(1.0, std::abs(e.d1));
            const double scale2 = std::max(1.0, std::abs(e.d2));
            CHECK(std::abs(e.d1 - d1) / scale1 < 1e-6);
            CHECK(std::abs(e.d2 - d2) / scale2 < 1e-6);
        }
    }
}

TEST_CASE("no overflow or nan far into the tails") {
    for (BasisId id : kAllIds) {
        for (double y : {-50.0, -10.0, 10.0, 50.0}) {
            const BasisEval e = eval_basis(id, y);
            CHECK(std::isfinite(e.value));
            CHECK(std::isfinite(e.d1));
            CHECK(std::isfinite(e.d2));
        }
    }
    // Gaussian-kernel family stays bounded; log cosh grows like |y|
    CHECK(std::abs(eval_basis(BasisId::G1bar, 10.0).value) < 1.0);
    CHECK(eval_basis(BasisId::G1, 50.0).value == doctest::Approx(50.0 - std::log(2.0)));
}

TEST_CASE("gaussian expectations") {
    CHECK(gaussian_expectation(BasisId::G1bar) == 0.0);
    CHECK(gaussian_expectation(BasisId::G2bar) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(gaussian_expectation(BasisId::G0) == 0.75);

    // independent quadrature for E{log cosh(nu)}
    const double want = oracle::gauss_weighted_integral(
        [](double y) { return std::log(std::cosh(y)); }, -10.0, 10.0);
    CHECK(gaussian_expectation(BasisId::G1) == doctest::Approx(want).epsilon(1e-9));

    // Monte Carlo cross-check
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        acc += eval_basis(BasisId::G1, normal(rng)).value;
    }
    CHECK(gaussian_expectation(BasisId::G1) == doctest::Approx(acc / n).epsilon(5e-3));
}

TEST_CASE("basis sets resolve by name") {
    const BasisSet two = BasisSet::from_name("mica2");
    REQUIRE(two.p() == 2);
    CHECK(two.ids[0] == BasisId::G1bar);
    CHECK(two.ids[1] == BasisId::G2bar);

    const BasisSet four = BasisSet::from_name("mica4");
    REQUIRE(four.p() == 4);
    CHECK(four.ids[2] == BasisId::G0);
    CHECK(four.ids[3] == BasisId::G1);

    CHECK_THROWS_AS(BasisSet::from_name("mica3"), UnknownDistribution);
}

TEST_CASE("vector eval agrees with scalar eval") {
    const BasisSet b = BasisSet::from_name("mica4");
    double values[4], d1[4], d2[4];
    eval_basis(b, 1.3, values, d1, d2);
    for (int k = 0; k < 4; ++k) {
        const BasisEval e = eval_basis(b.ids[k], 1.3);
        CHECK(values[k] == e.value);
        CHECK(d1[k] == e.d1);
        CHECK(d2[k] == e.d2);
    }
}

TEST_CASE("tilt evaluation is linear in the coefficients") {
    const BasisSet b = BasisSet::from_name("mica2");
    Vector a(2), c(2);
    a << 0.3, -0.2;
    c << -1.1, 0.4;
    const double alpha = 0.7, gamma = -1.3;
    for (double y = -4.0; y <= 4.0; y += 0.83) {
        const TiltEval ea = eval_tilt(a, b, y);
        const TiltEval ec = eval_tilt(c, b, y);
        const TiltEval mix = eval_tilt(alpha * a + gamma * c, b, y);
        CHECK(mix.f == doctest::Approx(alpha * ea.f + gamma * ec.f).epsilon(1e-12));
        CHECK(mix.f1 == doctest::Approx(alpha * ea.f1 + gamma * ec.f1).epsilon(1e-12));
        CHECK(mix.f2 == doctest::Approx(alpha * ea.f2 + gamma * ec.f2).epsilon(1e-12));
    }
}

TEST_CASE("unit coefficient vector reproduces one basis function") {
    const BasisSet b = BasisSet::from_name("mica2");
    Vector e1(2);
    e1 << 1.0, 0.0;
    const TiltEval t = eval_tilt(e1, b, 1.5);
    const BasisEval g = eval_basis(BasisId::G1bar, 1.5);
    CHECK(t.f == g.value);
    CHECK(t.f1 == g.d1);
    CHECK(t.f2 == g.d2);
}

TEST_CASE("zero tilt is identically zero") {
    const BasisSet b = BasisSet::from_name("mica4");
    const Vector zero = Vector::Zero(4);
    for (double y : {-3.0, 0.0, 2.2}) {
        const TiltEval t = eval_tilt(zero, b, y);
        CHECK(t.f == 0.0);
        CHECK(t.f1 == 0.0);
        CHECK(t.f2 == 0.0);
    }
}

TEST_CASE("coefficient length must match the basis") {
    const BasisSet b = BasisSet::from_name("mica2");
    CHECK_THROWS_AS(eval_tilt(Vector::Zero(3), b, 0.0), DimensionMismatch);
}

TEST_CASE("design matrices match pointwise evaluation") {
    const BasisSet b = BasisSet::from_name("mica4");
    Vector y(5);
    y << -2.0, -0.5, 0.0, 1.0, 3.5;
    Matrix values, d1, d2;
    basis_design(b, y, &values, &d1, &d2);
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 4; ++k) {
            const BasisEval e = eval_basis(b.ids[k], y[i]);
            CHECK(values(i, k) == doctest::Approx(e.value).epsilon(1e-14));
            CHECK(d1(i, k) == doctest::Approx(e.d1).epsilon(1e-14));
            CHECK(d2(i, k) == doctest::Approx(e.d2).epsilon(1e-14));
        }
    }

    Vector beta(4);
    beta << 0.2, -0.4, 0.05, 0.6;
    Vector f, f1, f2;
    tilt_curves(beta, b, y, &f, &f1, &f2);
    for (int i = 0; i < 5; ++i) {
        const TiltEval t = eval_tilt(beta, b, y[i]);
        CHECK(f[i] == doctest::Approx(t.f).epsilon(1e-12));
        CHECK(f1[i] == doctest::Approx(t.f1).epsilon(1e-12));
        CHECK(f2[i] == doctest::Approx(t.f2).epsilon(1e-12));
    }
}

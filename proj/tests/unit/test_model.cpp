#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spdc/error.hpp"
#include "spdc/model.hpp"

using namespace spdc;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("pump wavenumber of the reference crystal") {
    const auto c = OpticalConfig::reference();
    CHECK(rel(pump_wavenumber(c), 2 * std::numbers::pi * 1.455 / 800e-9) < 1e-15);
    CHECK(rel(pump_wavenumber(c), 1.142754e7) < 1e-6);
}

TEST_CASE("momentum coefficients at the crystal face") {
    const auto m = momentum_coeffs(OpticalConfig::reference(), 0.0);
    CHECK(rel(m.A.real(), 6.4e-7) < 1e-14);
    CHECK(rel(m.A.imag(), 8.75079e-10) < 1e-5);
    CHECK(rel(m.B.real(), 1.99080e-10) < 1e-5);
    CHECK(rel(m.B.imag(), 4.37539e-10) < 1e-5);
}

TEST_CASE("coordinate coefficients are the squared moduli") {
    const auto c = OpticalConfig::reference();
    const auto cc = coord_coeffs(c, 0.0);
    CHECK(rel(cc.beta, 2.310737e-19) < 1e-6);
    CHECK(rel(cc.gamma, 4.096008e-13) < 1e-6);
    for (double z : {0.0, 0.01, 0.062, 0.2, 1.0}) {
        const auto m = momentum_coeffs(c, z);
        const auto k = coord_coeffs(c, z);
        CHECK(rel(k.beta, std::norm(m.B)) < 1e-14);
        CHECK(rel(k.gamma, std::norm(m.A)) < 1e-14);
        CHECK(k.re_a == m.A.real());
        CHECK(k.re_b == m.B.real());
    }
}

TEST_CASE("Im(B) at 6.2 cm") {
    const auto m = momentum_coeffs(OpticalConfig::reference(), 0.062);
    CHECK(rel(m.B.imag(), 1.12885e-8) < 1e-5);
}

TEST_CASE("collimated pump has no curvature term") {
    auto c = OpticalConfig::reference();
    CHECK(curvature_phase_term(c) == 0.0);
    c.pump_inverse_curvature = 1.0;
    CHECK(curvature_phase_term(c) != 0.0);
    CHECK(modulus_width_sum(c) < c.pump_waist * c.pump_waist);
}

TEST_CASE("balanced curvature equalizes mu1 and mu2") {
    auto c = OpticalConfig::reference();
    c.pump_inverse_curvature = balanced_inverse_curvature(c);
    for (double z : {0.0, 0.1, 0.5}) CHECK(std::abs(mu1(c, z) - mu2(c, z)) <= 1e-15 * std::abs(mu2(c, z)) * 4);
    const auto m = momentum_coeffs(c, 0.3);
    CHECK(std::abs((m.A - m.B).imag()) <= 1e-14 * std::abs(m.A.imag()));
}

TEST_CASE("negative z and invalid configs are rejected") {
    const auto c = OpticalConfig::reference();
    CHECK_THROWS_AS(momentum_coeffs(c, -1e-3), Error);
    try {
        momentum_coeffs(c, -1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfDomain);
    }
    auto bad = c;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = c;
    bad.pump_waist = -1.0;
    CHECK_THROWS_AS(momentum_coeffs(bad, 0.0), Error);
}

TEST_CASE("amplitudes are normalized and exchange symmetric") {
    const auto c = OpticalConfig::reference();
    const auto m = momentum_coeffs(c, 0.05);
    const auto k = coord_coeffs(m);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> p(0.0, 3e4), x(0.0, 5e-4);
    for (int i = 0; i < 200; ++i) {
        const Vec2 a{p(rng), p(rng)}, b{p(rng), p(rng)};
        CHECK(std::abs(mode_function_momentum(m, a, b)) == doctest::Approx(std::abs(mode_function_momentum(m, b, a))).epsilon(1e-12));
        const Vec2 s{x(rng), x(rng)}, t{x(rng), x(rng)};
        CHECK(std::abs(wave_function_coord(k, s, t)) == doctest::Approx(std::abs(wave_function_coord(k, t, s))).epsilon(1e-12));
    }

    // 1D quadrature of |coordinate factor|^2 on a rotated frame: integral over (x+, x-)
    // with Jacobian 1/2 separates into two Gaussians.
    double sum = 0.0;
    const double hp = 10 * std::sqrt(k.gamma / k.re_a), hm = 10 * std::sqrt(k.beta / k.re_b);
    const int n = 800;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double up = -hp + 2 * hp * (i + 0.5) / n, um = -hm + 2 * hm * (j + 0.5) / n;
            sum += std::norm(coordinate_factor(k, 0.5 * (up + um), 0.5 * (up - um)));
        }
    sum *= 0.5 * (2 * hp / n) * (2 * hm / n);
    CHECK(sum * sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sinc versus Gaussian residual") {
    CHECK(sinc_gaussian_residual(1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    // At the Gaussian's 1/e^2 intensity point, alpha b x^2 = 1.
    const double r = sinc_gaussian_residual(1.0, std::sqrt(1.0 / 0.455));
    CHECK(r == doctest::Approx(5.74e-4).epsilon(0.01));
    CHECK_THROWS_AS(sinc_gaussian_residual(0.0, 1.0), Error);
}

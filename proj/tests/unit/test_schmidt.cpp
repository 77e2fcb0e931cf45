#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "spdc/error.hpp"
#include "spdc/schmidt.hpp"

using namespace spdc;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an spdc::Error");
    return ErrorCode::Numeric;
}

}  // namespace

TEST_CASE("identical coefficients give a product state") {
    const complex A{3e-7, 2e-9};
    const auto d = schmidt_params(A, A);
    CHECK(d.b == 0.0);
    CHECK(d.c == Approx(d.a).epsilon(1e-15));
    CHECK(d.w == 0.0);
    CHECK(schmidt_number(A, A) == 1.0);
    const auto s = schmidt_spectrum(d);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("A = 2, B = 1 test scale") {
    const auto d = schmidt_params(2.0, 1.0);
    CHECK(d.a == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d.b == Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(d.c == Approx(std::sqrt(4.0 / 9.0 + 1.0 / 18.0)).epsilon(1e-15));
    CHECK(d.w == Approx(0.0294373).epsilon(1e-5));
    // (2/3 / 0.70711)^(1/2) (1 - w^2)^(1/2)
    CHECK(schmidt_spectrum(d)[0] == Approx(0.970563).epsilon(1e-6));
}

TEST_CASE("A = 1 + i, B = 1 - i gives K = 2") {
    CHECK(schmidt_number(complex{1, 1}, complex{1, -1}) == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("reference config Schmidt number") {
    const auto c = OpticalConfig::reference();
    CHECK(rel(schmidt_number(c, 0.0), 804.19580) < 1e-7);
    const auto m = momentum_coeffs(c, 0.0);
    const auto d = schmidt_params(m.A, m.B);
    CHECK(rel(d.a, 1.99019e-10) < 1e-5);
    CHECK(rel(d.b, 7.99254e-8) < 1e-5);
    CHECK(rel(d.c, 5.64384e-9) < 1e-5);
    CHECK(rel(d.w, 0.931876) < 1e-6);
    CHECK(rel(d.K1d, std::sqrt(804.19580)) < 1e-7);
    for (double z : {0.0, 0.062, 0.2, 3.0}) CHECK(rel(schmidt_number(c, z), schmidt_number(c, 0.0)) < 1e-12);
}

TEST_CASE("spectrum sums to one and matches purity") {
    const auto m = momentum_coeffs(OpticalConfig::reference(), 0.0);
    const auto d = schmidt_params(m.A, m.B);
    const auto s = schmidt_spectrum(d, 1e-12);
    CHECK(std::abs(std::accumulate(s.begin(), s.end(), 0.0) - 1.0) < 1e-9);
    double purity = 0.0;
    for (double l : s) purity += l * l;
    CHECK(rel(purity, d.a / d.c) < 1e-9);
    for (size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
    CHECK(code_of([&] { schmidt_spectrum(d, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("ellipticity and migration point") {
    const auto c = OpticalConfig::reference();
    CHECK(rel(ellipticity(c, 0.0), 1.8136e-3) < 1e-4);
    CHECK(rel(ellipticity(c, 0.01), 0.0379) < 1e-2);
    CHECK(rel(ellipticity(c, 0.2), 9.83) < 1e-3);
    const double z0 = find_migration_point(c, 1.0);
    CHECK(std::abs(z0 - 0.0619960) < 1e-6);
    CHECK(std::abs(z0 - 0.062) < 1e-3);
    CHECK(std::abs(ellipticity(c, z0) - 1.0) < 1e-4);
    double prev = ellipticity(c, z0);
    for (double z = z0 + 0.01; z < 2.0; z += 0.05) {
        const double e = ellipticity(c, z);
        CHECK(e > prev);
        prev = e;
    }
    CHECK(code_of([&] { find_migration_point(c, 0.01); }) == ErrorCode::NoRoot);
}

TEST_CASE("Fedorov ratios") {
    const auto c = OpticalConfig::reference();
    CHECK(rel(fedorov_coordinate(c, 0.0), 138.3479) < 1e-6);
    const double z0 = find_migration_point(c, 1.0, 1e-12);
    CHECK(std::abs(fedorov_coordinate(c, z0) - 1.0) < 1e-6);
    for (double e : {1e-3, 0.3, 2.0, 47.0}) CHECK(rel(fedorov_from_ellipticity(e), fedorov_from_ellipticity(1 / e)) < 1e-14);

    const double k = schmidt_number(c, 0.0);
    const double fp = fedorov_momentum(c, 0.0);
    CHECK(fp < k);
    CHECK(rel(fp, 804.19543) < 1e-7);
    const auto m = momentum_coeffs(c, 0.0);
    const double deficit = std::pow((m.A - m.B).imag(), 2) / (4 * m.A.real() * m.B.real());
    CHECK(rel(k - fp, deficit) < 1e-6);
    CHECK(rel((k - fp) / k, 4.67e-7) < 1e-2);

    auto balanced = c;
    balanced.pump_inverse_curvature = balanced_inverse_curvature(c);
    CHECK(rel(fedorov_momentum(balanced, 0.0), schmidt_number(balanced, 0.0)) < 1e-12);
}

TEST_CASE("interferometer probabilities and inversion") {
    const auto p1 = interferometer_probabilities(1.0, 1.0);
    CHECK(p1.plus == 1.0);
    CHECK(p1.minus == 0.0);
    const auto p2 = interferometer_probabilities(complex{1, 1}, complex{1, -1});
    CHECK(p2.plus == Approx(0.75).epsilon(1e-15));
    CHECK(p2.minus == Approx(0.25).epsilon(1e-15));
    const auto m = momentum_coeffs(OpticalConfig::reference(), 0.0);
    const auto p = interferometer_probabilities(m.A, m.B);
    CHECK(p.plus == Approx(0.5006217).epsilon(1e-7));
    CHECK(p.minus == Approx(0.4993783).epsilon(1e-7));
    CHECK(std::abs(p.plus + p.minus - 1.0) <= 1e-15);

    CHECK(entanglement_from_probabilities(1.0, 0.0) == 1.0);
    CHECK(entanglement_from_probabilities(0.75, 0.25) == Approx(2.0).epsilon(1e-15));
    CHECK(rel(entanglement_from_probabilities(p.plus, p.minus), 804.19580) < 1e-7);
    CHECK(code_of([] { entanglement_from_probabilities(0.6, 0.6); }) == ErrorCode::Degenerate);
}

TEST_CASE("fringe parameters") {
    const auto c = OpticalConfig::reference();
    const auto f = fringe_params(c, 0.0);
    const auto k = coord_coeffs(c, 0.0);
    CHECK(rel(f.r_plus, 0.5 * (k.re_a / k.gamma + k.re_b / k.beta)) < 1e-14);
    CHECK(rel(f.r_plus, 4.3155e8) < 1e-3);
    CHECK(rel(f.i_minus, 0.5 * (k.mu1 / k.gamma - k.mu2 / k.beta)) < 1e-14);
    CHECK(rel(f.norm2, (f.r_plus * f.r_plus + f.i_minus * f.i_minus) / (std::numbers::pi * std::numbers::pi * 804.19580)) < 1e-6);

    CHECK(p_diff(f, {0, 0}, {0, 0}) == Approx(f.norm2).epsilon(1e-15));
    const double xi = 1e-5;
    const double xs = std::numbers::pi / 2 / (2 * f.i_minus * xi);
    CHECK(std::abs(p_diff(f, {xs, 0}, {xi, 0})) < 1e-12 * f.norm2);
}

TEST_CASE("fringe maximum location") {
    const FringeParams flat{1.0, 0.0, 1.0};
    CHECK(code_of([&] { locate_fringe_maximum(flat, 1.0, 2); }) == ErrorCode::NotFound);

    // r = R+/(2 I- x_i)^2 = 0.025: theta*/2pi = 0.953.
    const FringeParams f{0.1, 1.0, 1.0};
    const auto m = locate_fringe_maximum(f, 1.0, 2);
    CHECK(m.phase / (2 * std::numbers::pi) == Approx(0.953).epsilon(1e-3));
    CHECK(m.x_s == Approx(m.phase / 2.0).epsilon(1e-15));
    const double h = 1e-6;
    const auto pd = [&](double x) { return p_diff(f, {x, 0}, {1.0, 0}); };
    CHECK(pd(m.x_s) > pd(m.x_s - h));
    CHECK(pd(m.x_s) > pd(m.x_s + h));

    const FringeParams thin{1e-12, 1.0, 1.0};
    CHECK(locate_fringe_maximum(thin, 1.0, 2).phase == Approx(2 * std::numbers::pi).epsilon(1e-10));
    CHECK(locate_fringe_maximum(thin, 1.0, 3).phase == Approx(4 * std::numbers::pi).epsilon(1e-10));
}

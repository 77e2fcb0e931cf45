#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spdc/error.hpp"
#include "spdc/grid.hpp"
#include "spdc/interferometer.hpp"

using namespace spdc;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

bool same(const Matrix2& a, const Matrix2& b) {
    return std::abs(a.xx - b.xx) < 1e-15 && std::abs(a.xy - b.xy) < 1e-15 && std::abs(a.yx - b.yx) < 1e-15 &&
           std::abs(a.yy - b.yy) < 1e-15;
}

GridField reference_field(double z, int n = 256) {
    const auto c = OpticalConfig::reference();
    return sample_coordinate_grid(c, z, default_grid(c, z, Space::Coordinate, n));
}

}  // namespace

TEST_CASE("element maps") {
    CHECK(same(mirror_map(), Matrix2{1, 0, 0, -1}));
    CHECK(same(dove_prism_map(0.0), Matrix2{1, 0, 0, -1}));
    CHECK(same(dove_prism_map(kPi / 2), Matrix2{-1, 0, 0, 1}));
    for (double t : {0.1, 0.7, 2.0}) {
        const auto d = dove_prism_map(t);
        CHECK(same(d * d, Matrix2::identity()));  // reflections are involutions
        CHECK(same(d * d.inverse(), Matrix2::identity()));
    }
}

TEST_CASE("composed ports reproduce the parity forms") {
    const auto c = OpticalConfig::reference();
    const auto psi = analytic_biphoton(c, 0.03);
    const auto ports = compose_interferometer(kPi / 2, 0.0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> x(0.0, 4e-4);
    for (int i = 0; i < 500; ++i) {
        const Vec2 s{x(rng), x(rng)}, t{x(rng), x(rng)};
        const double even = parity_port_even(psi, s, t), odd = parity_port_odd(psi, s, t);
        const double scale = std::norm(psi(s, t)) + 1e-300;
        CHECK(std::abs(port_intensity(ports.a, psi, s, t) - even) <= 1e-10 * (even + odd + scale));
        CHECK(std::abs(port_intensity(ports.b, psi, s, t) - odd) <= 1e-10 * (even + odd + scale));
    }
}

TEST_CASE("port probabilities are conserved at every quarter-turn setting") {
    const auto c = OpticalConfig::reference();
    const auto field = reference_field(0.05, oracle_grid_points(c, 0.05, Space::Coordinate));
    for (double t1 : {0.0, kPi / 2, kPi})
        for (double t2 : {0.0, kPi / 2, 3 * kPi / 2}) {
            const auto run = simulate_interferometer(field, field, t1, t2);
            CHECK(run.probabilities.plus + run.probabilities.minus == Approx(1.0).epsilon(1e-8));
            CHECK(run.probabilities.minus >= -1e-15);
        }
}

TEST_CASE("grid interferometer probabilities") {
    const auto c = OpticalConfig::reference();
    for (double z : {0.0, 0.031, 0.2}) {
        const auto field = reference_field(z, oracle_grid_points(c, z, Space::Coordinate));
        const auto run = simulate_interferometer(field, field, kPi / 2, 0.0);
        const auto m = momentum_coeffs(c, z);
        const auto exact = interferometer_probabilities(m.A, m.B);
        CHECK(std::abs(run.probabilities.plus - exact.plus) < 1e-3);
        CHECK(std::abs(run.probabilities.minus - exact.minus) < 1e-3);
        const double k = entanglement_from_probabilities(run.probabilities.plus, run.probabilities.minus);
        CHECK(std::abs(k / schmidt_number(c, z) - 1.0) < 1e-2);
        CHECK(run.map_a.size() == static_cast<size_t>(field.size() * field.size()));
    }
}

TEST_CASE("grid backend rejects angles off the quarter turns") {
    const auto field = reference_field(0.0);
    try {
        simulate_interferometer(field, field, 0.3, 0.0);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
    auto scaled = field;
    for (auto& v : scaled.values) v *= 2.0;
    CHECK_THROWS_AS(simulate_interferometer(scaled, field, kPi / 2, 0.0), Error);
}

TEST_CASE("port difference on the x slice equals the fringe form") {
    const auto c = OpticalConfig::reference();
    for (double z : {0.0, 0.062, 0.2}) {
        const auto psi = analytic_biphoton(c, z);
        const auto ports = compose_interferometer(kPi / 2, 0.0);
        const auto f = fringe_params(c, z);
        const double h = 3.0 / std::sqrt(f.r_plus);
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 20; ++j) {
                const Vec2 s{-h + h * i / 10.0, 0.0}, t{-h + h * j / 10.0, 0.0};
                const double diff = port_intensity(ports.a, psi, s, t) - port_intensity(ports.b, psi, s, t);
                CHECK(std::abs(diff - p_diff(f, s, t)) <= 1e-6 * f.norm2);
            }
    }
}

TEST_CASE("parity deviation on the grid is at round-off") {
    const auto field = reference_field(0.031);
    CHECK(parity_form_deviation(field, field, 2000, 5) < 1e-10);
}

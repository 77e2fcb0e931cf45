#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spdc/error.hpp"
#include "spdc/grid.hpp"

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

TEST_CASE("grid spec geometry") {
    const GridSpec g{16, 1.0};
    CHECK(g.spacing() == Approx(0.125));
    CHECK(g.coordinate(0) == Approx(-1.0 + 0.0625));
    CHECK(g.coordinate(15) == Approx(1.0 - 0.0625));
    for (int j = 0; j < 16; ++j) CHECK(g.coordinate(g.mirror(j)) == Approx(-g.coordinate(j)));
    CHECK_THROWS_AS((GridSpec{15, 1.0}.validate()), Error);
    CHECK_THROWS_AS((GridSpec{8, 1.0}.validate()), Error);
    CHECK_THROWS_AS((GridSpec{16, 0.0}.validate()), Error);
}

TEST_CASE("sampled fields are normalized") {
    const auto c = OpticalConfig::reference();
    const auto mf = sample_momentum_grid(c, 0.0, default_grid(c, 0.0, Space::Momentum, 512));
    CHECK(normalization_check(mf) < 1e-6);
    for (double z : {0.0, 0.062, 0.2}) {
        const auto cf = sample_coordinate_grid(c, z, default_grid(c, z, Space::Coordinate, 512));
        CHECK(normalization_check(cf) < 1e-6);
    }
}

TEST_CASE("coarse or narrow grids are rejected") {
    const auto c = OpticalConfig::reference();
    CHECK(code_of([&] { sample_momentum_grid(c, 0.0, default_grid(c, 0.0, Space::Momentum, 64)); }) ==
          ErrorCode::GridTooCoarse);
    CHECK(code_of([&] { sample_momentum_grid(c, 0.0, default_grid(c, 0.0, Space::Momentum, 512, 2.0)); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("DFT reproduces the coordinate closed form") {
    const auto c = OpticalConfig::reference();
    const int n = 1536;
    const auto mf = sample_momentum_grid(c, 0.0, default_grid(c, 0.0, Space::Momentum, n, 10.0));
    const auto cf = transform_to_coordinate(mf);
    CHECK(cf.space == Space::Coordinate);
    CHECK(cf.grid.half_width == Approx(std::numbers::pi / mf.grid.spacing()));
    const auto m = momentum_coeffs(c, 0.0);
    const auto k = coord_coeffs(m);
    const complex phase = std::sqrt(m.A * m.B) / std::abs(std::sqrt(m.A * m.B));
    const double peak = std::abs(coordinate_factor(k, 0.0, 0.0));
    double worst = 0.0;
    for (int i = 0; i < n; i += 3)
        for (int j = 0; j < n; j += 3) {
            const complex ref = coordinate_factor(k, cf.grid.coordinate(i), cf.grid.coordinate(j));
            if (std::abs(ref) < peak * std::exp(-4.5)) continue;
            worst = std::max(worst, std::abs(cf.at(i, j) * phase - ref) / std::abs(ref));
        }
    CHECK(worst < 1e-6);
    CHECK(std::abs(normalization_check(cf) - normalization_check(mf)) < 1e-12);
}

TEST_CASE("transform rejects coordinate input and aliasing") {
    const auto c = OpticalConfig::reference();
    const auto cf = sample_coordinate_grid(c, 0.0, default_grid(c, 0.0, Space::Coordinate, 256));
    CHECK(code_of([&] { transform_to_coordinate(cf); }) == ErrorCode::InvalidArgument);
    // Far from the crystal the coordinate state outgrows the reciprocal box pi/dp.
    const auto mf = sample_momentum_grid(c, 0.2, default_grid(c, 0.2, Space::Momentum, 512));
    CHECK(code_of([&] { transform_to_coordinate(mf); }) == ErrorCode::AliasingRisk);
}

TEST_CASE("numeric Schmidt number agrees with the closed form") {
    const auto c = OpticalConfig::reference();
    const double k = schmidt_number(c, 0.0);
    for (double z : {0.0, 0.062, 0.2}) {
        const int n = oracle_grid_points(c, z, Space::Coordinate);
        const auto f = sample_coordinate_grid(c, z, default_grid(c, z, Space::Coordinate, n));
        const auto s = numeric_schmidt(f);
        CHECK(rel(s.K, k) < 1e-6);
        CHECK(rel(s.K, s.K1d * s.K1d) < 1e-14);
        double sum = 0.0;
        for (double l : s.eigenvalues) sum += l;
        CHECK(sum == Approx(1.0).epsilon(1e-12));
    }
    auto f = sample_coordinate_grid(c, 0.0, default_grid(c, 0.0, Space::Coordinate, 256));
    for (auto& v : f.values) v *= 1.1;
    CHECK(code_of([&] { numeric_schmidt(f); }) == ErrorCode::Unnormalized);
}

TEST_CASE("grid moments give the Fedorov ratios") {
    const auto c = OpticalConfig::reference();
    const double z0 = find_migration_point(c, 1.0);
    for (double z : {0.0, z0, 0.2}) {
        const auto f = sample_coordinate_grid(c, z, default_grid(c, z, Space::Coordinate, 512));
        CHECK(rel(numeric_moments(f).fedorov, fedorov_coordinate(c, z)) < 5e-3);
    }
    const auto mf = sample_momentum_grid(c, 0.0, default_grid(c, 0.0, Space::Momentum, 1024));
    CHECK(rel(numeric_moments(mf).fedorov, fedorov_momentum(c, 0.0)) < 5e-3);
    const auto coarse = sample_momentum_grid(c, 0.0, default_grid(c, 0.0, Space::Momentum, 512));
    CHECK(code_of([&] { numeric_moments(coarse); }) == ErrorCode::Underresolved);
}

TEST_CASE("principal axes follow the correlation regime") {
    const auto c = OpticalConfig::reference();
    const double z0 = find_migration_point(c, 1.0, 1e-12);
    const auto near = principal_axes(sample_coordinate_grid(c, 0.0, default_grid(c, 0.0, Space::Coordinate, 512)));
    CHECK(near.ratio > 1.0);
    CHECK(near.angle == Approx(std::numbers::pi / 4).epsilon(1e-9));
    const auto mid = principal_axes(sample_coordinate_grid(c, z0, default_grid(c, z0, Space::Coordinate, 512)));
    CHECK(std::abs(mid.ratio - 1.0) < 1e-3);
    const auto far = principal_axes(sample_coordinate_grid(c, 0.2, default_grid(c, 0.2, Space::Coordinate, 512)));
    CHECK(far.ratio > 1.0);
    CHECK(far.angle == Approx(-std::numbers::pi / 4).epsilon(1e-9));
}

TEST_CASE("oracle grid sizing and fringe quadrature") {
    const auto c = OpticalConfig::reference();
    const int n = oracle_grid_points(c, 0.0, Space::Coordinate);
    CHECK(n >= 256);
    CHECK(n % 64 == 0);
    CHECK(code_of([&] { oracle_grid_points(c, 0.0, Space::Coordinate, 128); }) == ErrorCode::GridTooCoarse);
    for (double z : {0.0, 0.062, 0.2})
        CHECK(rel(fringe_quadrature(fringe_params(c, z)), 1.0 / schmidt_number(c, 0.0)) < 1e-4);
}

#include "spdc/interferometer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "spdc/error.hpp"

namespace spdc {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr double kSnapTolerance = 1e-12;

struct AxisSigns {
    int x = 1;
    int y = 1;
};

// Grid backend: a pullback must be diag(+-1, +-1) up to rounding.
AxisSigns grid_signs(const Matrix2& m) {
    auto snap = [](double v) -> int {
        if (std::abs(v - 1.0) < kSnapTolerance) return 1;
        if (std::abs(v + 1.0) < kSnapTolerance) return -1;
        throw Error(ErrorCode::InvalidArgument,
                    "grid interferometer needs Dove angles that are multiples of pi/2 (mapped points off-grid)");
    };
    if (std::abs(m.xy) > kSnapTolerance || std::abs(m.yx) > kSnapTolerance)
        throw Error(ErrorCode::InvalidArgument,
                    "grid interferometer needs Dove angles that are multiples of pi/2 (axes mixed)");
    return {snap(m.xx), snap(m.yy)};
}

int mapped_index(const GridSpec& g, int sign, int i) { return sign > 0 ? i : g.mirror(i); }

void check_field_pair(const GridField& x_field, const GridField& y_field) {
    if (x_field.space != Space::Coordinate || y_field.space != Space::Coordinate)
        throw Error(ErrorCode::InvalidArgument, "interferometer fields must be coordinate-space");
    if (x_field.size() != y_field.size())
        throw Error(ErrorCode::InvalidArgument, "x and y fields must share a grid size");
    for (const GridField* f : {&x_field, &y_field}) {
        f->grid.validate();
        const double dev = normalization_check(*f);
        if (dev > 1e-3)
            throw Error(ErrorCode::Unnormalized,
                        "interferometer input is not normalized (deviation " + std::to_string(dev) + ")");
    }
}

struct GridTerm {
    complex weight;
    AxisSigns signs;
};

std::vector<GridTerm> grid_terms(const Beam& beam) {
    std::vector<GridTerm> out;
    out.reserve(beam.size());
    for (const auto& t : beam) out.push_back({t.weight, grid_signs(t.pullback)});
    return out;
}

// overlap[s][t] = sum_ij F(s i, j) conj(F(t i, j)) weight, index 0 <-> +1, 1 <-> -1.
using Overlaps = std::array<std::array<complex, 2>, 2>;

Overlaps axis_overlaps(const GridField& f) {
    Overlaps o{};
    const int n = f.size();
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            complex acc{0.0, 0.0};
            for (int i = 0; i < n; ++i) {
                const int is = mapped_index(f.grid, s == 0 ? 1 : -1, i);
                const int it = mapped_index(f.grid, t == 0 ? 1 : -1, i);
                for (int j = 0; j < n; ++j) acc += f.at(is, j) * std::conj(f.at(it, j));
            }
            o[s][t] = acc * f.weight();
        }
    return o;
}

double port_probability(const std::vector<GridTerm>& terms, const Overlaps& ox, const Overlaps& oy) {
    complex acc{0.0, 0.0};
    auto slot = [](int sign) { return sign > 0 ? 0 : 1; };
    for (const auto& k : terms)
        for (const auto& l : terms)
            acc += k.weight * std::conj(l.weight) * ox[slot(k.signs.x)][slot(l.signs.x)] *
                   oy[slot(k.signs.y)][slot(l.signs.y)];
    return 0.25 * acc.real();
}

complex grid_port_amplitude(const std::vector<GridTerm>& terms, const GridField& fx, const GridField& fy, int xs,
                            int ys, int xi, int yi) {
    complex acc{0.0, 0.0};
    for (const auto& t : terms)
        acc += t.weight * fx.at(mapped_index(fx.grid, t.signs.x, xs), xi) *
               fy.at(mapped_index(fy.grid, t.signs.y, ys), yi);
    return acc;
}

}  // namespace

Matrix2 Matrix2::inverse() const {
    const double det = xx * yy - xy * yx;
    if (det == 0.0) throw Error(ErrorCode::Numeric, "singular element map");
    return {yy / det, -xy / det, -yx / det, xx / det};
}

Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
    return {l.xx * r.xx + l.xy * r.yx, l.xx * r.xy + l.xy * r.yy, l.yx * r.xx + l.yy * r.yx,
            l.yx * r.xy + l.yy * r.yy};
}

Matrix2 mirror_map() { return {1.0, 0.0, 0.0, -1.0}; }

Matrix2 dove_prism_map(double theta) {
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    return {c, -s, -s, -c};
}

Beam propagate(const Beam& beam, const Matrix2& element) {
    // New amplitude at r is the old amplitude at element^-1(r).
    const Matrix2 inv = element.inverse();
    Beam out;
    out.reserve(beam.size());
    for (const auto& t : beam) out.push_back({t.weight, t.pullback * inv});
    return out;
}

BeamSplitterOutputs beam_splitter(const Beam& in) {
    Beam reflected = propagate(in, mirror_map());
    for (auto& t : reflected) t.weight *= kI;
    return {in, std::move(reflected)};
}

Beam superpose(Beam lhs, const Beam& rhs) {
    lhs.insert(lhs.end(), rhs.begin(), rhs.end());
    return lhs;
}

InterferometerPorts compose_interferometer(double theta1, double theta2) {
    const Beam source{AmplitudeTerm{}};
    const Beam routed = propagate(source, mirror_map());  // PBS reflection
    const auto bs1 = beam_splitter(routed);
    const Beam arm1 = propagate(propagate(bs1.transmitted, dove_prism_map(theta1)), mirror_map());
    const Beam arm2 = propagate(propagate(bs1.reflected, dove_prism_map(theta2)), mirror_map());
    const auto out1 = beam_splitter(arm1);
    const auto out2 = beam_splitter(arm2);
    return {superpose(out2.transmitted, out1.reflected), superpose(out1.transmitted, out2.reflected)};
}

double port_intensity(const Beam& port, const Biphoton& psi, const Vec2& xs, const Vec2& xi) {
    complex acc{0.0, 0.0};
    for (const auto& t : port) acc += t.weight * psi(t.pullback(xs), xi);
    return 0.25 * std::norm(acc);
}

double parity_port_even(const Biphoton& psi, const Vec2& xs, const Vec2& xi) {
    return 0.25 * std::norm(psi({xs[0], xs[1]}, xi) + psi({-xs[0], -xs[1]}, xi));
}

double parity_port_odd(const Biphoton& psi, const Vec2& xs, const Vec2& xi) {
    return 0.25 * std::norm(psi({xs[0], -xs[1]}, xi) - psi({-xs[0], xs[1]}, xi));
}

Biphoton analytic_biphoton(const OpticalConfig& config, double z) {
    const CoordCoeffs c = coord_coeffs(config, z);
    return [c](const Vec2& xs, const Vec2& xi) { return wave_function_coord(c, xs, xi); };
}

InterferometerRun simulate_interferometer(const GridField& x_field, const GridField& y_field, double theta1,
                                          double theta2) {
    check_field_pair(x_field, y_field);
    const auto ports = compose_interferometer(theta1, theta2);
    const auto terms_a = grid_terms(ports.a);
    const auto terms_b = grid_terms(ports.b);

    const Overlaps ox = axis_overlaps(x_field);
    const Overlaps oy = axis_overlaps(y_field);

    InterferometerRun run;
    run.grid = x_field.grid;
    run.probabilities = {port_probability(terms_a, ox, oy), port_probability(terms_b, ox, oy)};

    const int n = x_field.size();
    const int centre = n / 2;
    run.map_a.resize(static_cast<std::size_t>(n) * n);
    run.map_b.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            run.map_a[idx] = 0.25 * std::norm(grid_port_amplitude(terms_a, x_field, y_field, i, centre, j, centre));
            run.map_b[idx] = 0.25 * std::norm(grid_port_amplitude(terms_b, x_field, y_field, i, centre, j, centre));
        }
    return run;
}

double parity_form_deviation(const GridField& x_field, const GridField& y_field, int samples, unsigned seed) {
    check_field_pair(x_field, y_field);
    const auto ports = compose_interferometer(std::numbers::pi / 2.0, 0.0);
    const auto terms_a = grid_terms(ports.a);
    const auto terms_b = grid_terms(ports.b);

    const int n = x_field.size();
    const GridSpec& g = x_field.grid;
    auto psi = [&](int xs, int ys, int xi, int yi) { return x_field.at(xs, xi) * y_field.at(ys, yi); };

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const int xs = pick(rng), ys = pick(rng), xi = pick(rng), yi = pick(rng);
        const int mxs = g.mirror(xs), mys = g.mirror(ys);

        const double even = 0.25 * std::norm(psi(xs, ys, xi, yi) + psi(mxs, mys, xi, yi));
        const double odd = 0.25 * std::norm(psi(xs, mys, xi, yi) - psi(mxs, ys, xi, yi));
        const double a = 0.25 * std::norm(grid_port_amplitude(terms_a, x_field, y_field, xs, ys, xi, yi));
        const double b = 0.25 * std::norm(grid_port_amplitude(terms_b, x_field, y_field, xs, ys, xi, yi));

        const double scale_even = 0.25 * std::pow(std::abs(psi(xs, ys, xi, yi)) + std::abs(psi(mxs, mys, xi, yi)), 2);
        const double scale_odd = 0.25 * std::pow(std::abs(psi(xs, mys, xi, yi)) + std::abs(psi(mxs, ys, xi, yi)), 2);
        if (scale_even > 0.0) worst = std::max(worst, std::abs(a - even) / scale_even);
        if (scale_odd > 0.0) worst = std::max(worst, std::abs(b - odd) / scale_odd);
    }
    return worst;
}

}  // namespace spdc

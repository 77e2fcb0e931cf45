#include "spdc/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spdc/error.hpp"

namespace spdc {

namespace {

void require_normalizable(complex A, complex B) {
    if (!(A.real() > 0.0) || !(B.real() > 0.0) || !std::isfinite(A.imag()) || !std::isfinite(B.imag()))
        throw Error(ErrorCode::InvalidArgument, "non-normalizable biphoton: Re(A) and Re(B) must be > 0");
}

}  // namespace

SchmidtData schmidt_params(complex A, complex B) {
    require_normalizable(A, B);
    SchmidtData d;
    const double re_sum = (A + B).real();
    d.a = A.real() * B.real() / re_sum;
    d.b = std::norm(A - B) / (8.0 * re_sum);
    d.c = std::sqrt(d.a * d.a + 2.0 * d.a * d.b);
    d.w = d.b / (d.a + d.b + d.c);
    d.K1d = d.c / d.a;
    d.K = d.K1d * d.K1d;
    return d;
}

double schmidt_number(complex A, complex B) {
    require_normalizable(A, B);
    const double re_sum = (A + B).real();
    const double re_diff = (A - B).real();
    const double im_diff = (A - B).imag();
    return (re_sum * re_sum + im_diff * im_diff) / (re_sum * re_sum - re_diff * re_diff);
}

double schmidt_number(const OpticalConfig& config, double z) {
    const auto m = momentum_coeffs(config, z);
    return schmidt_number(m.A, m.B);
}

std::vector<double> schmidt_spectrum(const SchmidtData& data, double tail_cutoff) {
    if (!(tail_cutoff > 0.0 && tail_cutoff < 1.0))
        throw Error(ErrorCode::InvalidArgument, "tail_cutoff must lie in (0, 1)");
    if (!(data.w >= 0.0 && data.w < 1.0) || !(data.a > 0.0) || !(data.c > 0.0))
        throw Error(ErrorCode::InvalidArgument, "invalid Schmidt parameters");

    const double lambda0 = std::sqrt(data.a / data.c) * std::sqrt(1.0 - data.w * data.w);
    std::vector<double> spectrum{lambda0};
    if (data.w == 0.0) return spectrum;
    const double floor = tail_cutoff * lambda0;
    for (double lambda = lambda0 * data.w; lambda >= floor; lambda *= data.w) spectrum.push_back(lambda);
    return spectrum;
}

double ellipticity(const OpticalConfig& config, double z) {
    const auto c = coord_coeffs(config, z);
    return (c.re_a * c.beta) / (c.re_b * c.gamma);
}

double find_migration_point(const OpticalConfig& config, double z_max, double tolerance) {
    config.validate();
    if (!(z_max > 0.0) || !std::isfinite(z_max))
        throw Error(ErrorCode::InvalidArgument, "z_max must be > 0");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "root tolerance must be > 0");

    auto residual = [&](double z) { return ellipticity(config, z) - 1.0; };

    const double r0 = residual(0.0);
    if (std::abs(r0) < 1e-14) return 0.0;

    // Logarithmic ladder from 1 um to z_max, 64 rungs per decade, led by z = 0.
    constexpr double kLadderStart = 1e-6;
    constexpr double kRungsPerDecade = 64.0;
    double lo = 0.0;
    double r_lo = r0;
    double hi = -1.0;
    const double decades = z_max > kLadderStart ? std::log10(z_max / kLadderStart) : 0.0;
    const int rungs = static_cast<int>(std::ceil(decades * kRungsPerDecade));
    for (int i = 0; i <= rungs; ++i) {
        double z = i == rungs ? z_max : kLadderStart * std::pow(10.0, i / kRungsPerDecade);
        z = std::min(z, z_max);
        const double r = residual(z);
        if (r == 0.0) return z;
        if ((r > 0.0) != (r_lo > 0.0)) {
            hi = z;
            break;
        }
        lo = z;
        r_lo = r;
    }
    if (hi < 0.0)
        throw Error(ErrorCode::NoRoot,
                    "no migration point: ellipticity does not cross 1 on [0, " + std::to_string(z_max) + "] m");

    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double r = residual(mid);
        if (r == 0.0) return mid;
        if ((r > 0.0) == (r_lo > 0.0)) {
            lo = mid;
            r_lo = r;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double fedorov_from_ellipticity(double e) {
    if (!(e > 0.0)) throw Error(ErrorCode::InvalidArgument, "ellipticity must be > 0");
    return (1.0 + e) * (1.0 + e) / (4.0 * e);
}

double fedorov_coordinate(const OpticalConfig& config, double z) {
    return fedorov_from_ellipticity(ellipticity(config, z));
}

double fedorov_momentum(const OpticalConfig& config, double z) {
    const auto m = momentum_coeffs(config, z);
    return fedorov_from_ellipticity(m.A.real() / m.B.real());
}

PortProbabilities interferometer_probabilities(complex A, complex B) {
    const double inv_k = 1.0 / schmidt_number(A, B);
    return {0.5 * (1.0 + inv_k), 0.5 * (1.0 - inv_k)};
}

double entanglement_from_probabilities(double p_plus, double p_minus) {
    if (!(p_minus >= 0.0) || !(p_plus >= 0.0) || !std::isfinite(p_plus) || !std::isfinite(p_minus))
        throw Error(ErrorCode::InvalidArgument, "port probabilities must be finite and >= 0");
    if (!(p_plus > p_minus))
        throw Error(ErrorCode::Degenerate,
                    "degenerate ports: P+ must exceed P- (equal ports mean unresolved entanglement)");
    return (p_plus + p_minus) / (p_plus - p_minus);
}

FringeParams fringe_params(const MomentumCoeffs& m) {
    const auto c = coord_coeffs(m);
    FringeParams f;
    // Half the often-quoted expressions: these are the constants implied by the
    // coordinate-space amplitude itself (|Psi|^2 carries 1/(2 gamma), 1/(2 beta)).
    f.r_plus = 0.5 * (c.re_a / c.gamma + c.re_b / c.beta);
    f.i_minus = 0.5 * (c.mu1 / c.gamma - c.mu2 / c.beta);
    // Fixed by the integral of P_diff over both photons being 1/K.
    const double k = schmidt_number(m.A, m.B);
    f.norm2 = (f.r_plus * f.r_plus + f.i_minus * f.i_minus) / (std::numbers::pi * std::numbers::pi * k);
    return f;
}

FringeParams fringe_params(const OpticalConfig& config, double z) {
    return fringe_params(momentum_coeffs(config, z));
}

double p_diff(const FringeParams& f, const Vec2& xs, const Vec2& xi) {
    const double radial = xs[0] * xs[0] + xs[1] * xs[1] + xi[0] * xi[0] + xi[1] * xi[1];
    const double dot = xs[0] * xi[0] + xs[1] * xi[1];
    return f.norm2 * std::exp(-f.r_plus * radial) * std::cos(2.0 * f.i_minus * dot);
}

FringeMaximum locate_fringe_maximum(const FringeParams& f, double x_i, int order) {
    if (order < 2) throw Error(ErrorCode::InvalidArgument, "fringe order must be >= 2");
    if (x_i == 0.0 || !std::isfinite(x_i)) throw Error(ErrorCode::InvalidArgument, "x_i must be nonzero");
    if (f.i_minus == 0.0) throw Error(ErrorCode::NotFound, "I- = 0: the pattern has no fringes");
    if (!(f.r_plus > 0.0)) throw Error(ErrorCode::InvalidArgument, "R+ must be > 0");

    // Along the slice P_diff ~ exp(-r theta^2) cos(theta), theta = 2|I- x_i| x_s.
    const double scale = 2.0 * std::abs(f.i_minus * x_i);
    const double r = f.r_plus / (scale * scale);
    auto slope = [r](double theta) { return 2.0 * r * theta * std::cos(theta) + std::sin(theta); };

    // slope < 0 at 2k pi - pi/2 and > 0 at 2k pi, monotone in between.
    const double k = static_cast<double>(order - 1);
    double lo = 2.0 * std::numbers::pi * k - 0.5 * std::numbers::pi;
    double hi = 2.0 * std::numbers::pi * k;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    const double theta = 0.5 * (lo + hi);
    const double x_s = theta / scale;

    // Height relative to the slice's central peak.
    const double amplitude = std::exp(-r * theta * theta) * std::cos(theta);
    if (!(amplitude >= 1e-12))
        throw Error(ErrorCode::NotFound, "no maximum of order " + std::to_string(order) + " within envelope");
    return {x_s, theta};
}

}  // namespace spdc

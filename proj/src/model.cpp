#include "spdc/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spdc/error.hpp"

namespace spdc {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, std::string("invalid optical config: ") + what);
}

void require_z(double z) {
    if (!std::isfinite(z) || z < 0.0)
        throw Error(ErrorCode::OutOfDomain, "propagation distance z must be >= 0 (z = " + std::to_string(z) + ")");
}

// 1/sigma0 with sigma0 = -2R/k_p.
double inverse_sigma0(const OpticalConfig& c) {
    return -0.5 * pump_wavenumber(c) * c.pump_inverse_curvature;
}

}  // namespace

void OpticalConfig::validate() const {
    require(std::isfinite(crystal_length) && crystal_length > 0.0, "crystal_length must be > 0");
    require(std::isfinite(pump_waist) && pump_waist > 0.0, "pump_waist must be > 0");
    require(std::isfinite(pump_wavelength) && pump_wavelength > 0.0, "pump_wavelength must be > 0");
    require(std::isfinite(pump_refractive_index) && pump_refractive_index >= 1.0,
            "pump_refractive_index must be >= 1");
    require(std::isfinite(pump_inverse_curvature), "pump_inverse_curvature must be finite");
    require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
}

OpticalConfig OpticalConfig::reference() {
    OpticalConfig c;
    c.crystal_length = 5e-3;
    c.pump_waist = 800e-6;
    c.pump_wavelength = 800e-9;
    c.pump_refractive_index = 1.455;
    c.pump_inverse_curvature = 0.0;
    c.alpha = kDefaultAlpha;
    return c;
}

double pump_wavenumber(const OpticalConfig& config) {
    config.validate();
    return 2.0 * std::numbers::pi * config.pump_refractive_index / config.pump_wavelength;
}

double modulus_width_sum(const OpticalConfig& config) {
    const double w2 = config.pump_waist * config.pump_waist;
    const double s = inverse_sigma0(config);
    return w2 / (1.0 + w2 * w2 * s * s);
}

double modulus_width_difference(const OpticalConfig& config) {
    return config.alpha * config.crystal_length / pump_wavenumber(config);
}

double curvature_phase_term(const OpticalConfig& config) {
    // sigma0/(1 + sigma0^2/w0^4) = w0^4 s/(1 + w0^4 s^2), s = 1/sigma0
    const double w4 = std::pow(config.pump_waist, 4);
    const double s = inverse_sigma0(config);
    return w4 * s / (1.0 + w4 * s * s);
}

double balanced_inverse_curvature(const OpticalConfig& config) {
    config.validate();
    const double k = pump_wavenumber(config);
    const double g = config.crystal_length / k;
    const double w4 = std::pow(config.pump_waist, 4);
    // g w4 s^2 - w4 s + g = 0
    const double disc = w4 * w4 - 4.0 * g * g * w4;
    if (disc < 0.0) throw Error(ErrorCode::NoRoot, "no pump curvature equalizes mu1 and mu2 for this waist");
    const double s = 2.0 * g / (w4 + std::sqrt(disc));
    return -2.0 * s / k;
}

double mu1(const OpticalConfig& config, double z) {
    require_z(z);
    return 2.0 * (z + config.crystal_length) / pump_wavenumber(config) - curvature_phase_term(config);
}

double mu2(const OpticalConfig& config, double z) {
    require_z(z);
    return (2.0 * z + config.crystal_length) / pump_wavenumber(config);
}

MomentumCoeffs momentum_coeffs(const OpticalConfig& config, double z) {
    config.validate();
    require_z(z);
    return MomentumCoeffs{complex(modulus_width_sum(config), mu1(config, z)),
                          complex(modulus_width_difference(config), mu2(config, z)), z};
}

CoordCoeffs coord_coeffs(const MomentumCoeffs& m) {
    if (!(m.A.real() > 0.0) || !(m.B.real() > 0.0))
        throw Error(ErrorCode::InvalidArgument, "Re(A) and Re(B) must be > 0");
    CoordCoeffs c;
    c.re_a = m.A.real();
    c.re_b = m.B.real();
    c.mu1 = m.A.imag();
    c.mu2 = m.B.imag();
    c.beta = c.re_b * c.re_b + c.mu2 * c.mu2;
    c.gamma = c.re_a * c.re_a + c.mu1 * c.mu1;
    c.norm = std::sqrt(c.re_a * c.re_b / (c.gamma * c.beta)) / std::numbers::pi;
    c.z = m.z;
    return c;
}

CoordCoeffs coord_coeffs(const OpticalConfig& config, double z) {
    return coord_coeffs(momentum_coeffs(config, z));
}

double momentum_factor_norm(const MomentumCoeffs& coeffs) {
    return std::pow(coeffs.A.real() * coeffs.B.real() / (std::numbers::pi * std::numbers::pi), 0.25);
}

complex momentum_factor(const MomentumCoeffs& coeffs, double p, double q) {
    const double sum = p + q;
    const double diff = p - q;
    return momentum_factor_norm(coeffs) * std::exp(-0.25 * (coeffs.A * sum * sum + coeffs.B * diff * diff));
}

complex coordinate_factor(const CoordCoeffs& c, double xs, double xi) {
    const double sum = xs + xi;
    const double diff = xs - xi;
    const complex exponent = -complex(c.re_b, -c.mu2) * (diff * diff / (4.0 * c.beta)) -
                             complex(c.re_a, -c.mu1) * (sum * sum / (4.0 * c.gamma));
    return std::sqrt(c.norm) * std::exp(exponent);
}

complex mode_function_momentum(const MomentumCoeffs& coeffs, const Vec2& p, const Vec2& q) {
    return momentum_factor(coeffs, p[0], q[0]) * momentum_factor(coeffs, p[1], q[1]);
}

complex wave_function_coord(const CoordCoeffs& coeffs, const Vec2& xs, const Vec2& xi) {
    return coordinate_factor(coeffs, xs[0], xi[0]) * coordinate_factor(coeffs, xs[1], xi[1]);
}

double sinc_gaussian_residual(double b, double x, double alpha) {
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "sinc scale b must be > 0");
    const double u = b * x * x;
    const double sinc = u == 0.0 ? 1.0 : std::sin(u) / u;
    return std::abs(sinc - std::exp(-alpha * u));
}

}  // namespace spdc

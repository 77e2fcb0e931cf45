#pragma once

#include <array>
#include <complex>

namespace spdc {

using complex = std::complex<double>;
using Vec2 = std::array<double, 2>;

inline constexpr double kDefaultAlpha = 0.455;

/// Crystal, pump and approximation parameters. SI units throughout.
///
/// The pump curvature is stored as 1/R so that a collimated pump is the exact
/// value 0. Every expression involving sigma0 = -2R/k_p is rewritten in terms
/// of 1/sigma0 and stays finite there.
struct OpticalConfig {
    double crystal_length = 0.0;         // L [m]
    double pump_waist = 0.0;             // w0 [m]
    double pump_wavelength = 0.0;        // lambda_p [m]
    double pump_refractive_index = 1.0;  // n_p
    double pump_inverse_curvature = 0.0; // 1/R [1/m]
    double alpha = kDefaultAlpha;        // sinc -> Gaussian matching constant

    /// Throws Error(InvalidArgument) naming the first violated invariant.
    void validate() const;

    /// L = 5 mm, w0 = 800 um, lambda_p = 800 nm, n_p = 1.455, collimated.
    static OpticalConfig reference();
};

/// Coefficients of the momentum-space biphoton
/// Phi = N exp(-[A|p+q|^2 + B|p-q|^2]/4).
struct MomentumCoeffs {
    complex A;
    complex B;
    double z = 0.0;
};

/// Coefficients of the coordinate-space biphoton. `norm` is the 2D amplitude
/// normalization; the per-axis factor carries sqrt(norm).
struct CoordCoeffs {
    double beta = 0.0;   // |B|^2
    double gamma = 0.0;  // |A|^2
    double mu1 = 0.0;
    double mu2 = 0.0;
    double re_a = 0.0;   // w0^2/(1+w0^4/sigma0^2)
    double re_b = 0.0;   // alpha L / k_p
    double norm = 0.0;
    double z = 0.0;
};

double pump_wavenumber(const OpticalConfig& config);

/// Re(A): w0^2/(1 + w0^4/sigma0^2).
double modulus_width_sum(const OpticalConfig& config);
/// Re(B): alpha L / k_p.
double modulus_width_difference(const OpticalConfig& config);
/// sigma0/(1 + sigma0^2/w0^4), zero for a collimated pump.
double curvature_phase_term(const OpticalConfig& config);

// Inverse curvature (weaker of the two roots) at which the curvature term equals
// L/k_p, making mu1 = mu2 and A - B real. Throws NoRoot if the waist is too small.
double balanced_inverse_curvature(const OpticalConfig& config);

double mu1(const OpticalConfig& config, double z);
double mu2(const OpticalConfig& config, double z);

MomentumCoeffs momentum_coeffs(const OpticalConfig& config, double z);
CoordCoeffs coord_coeffs(const OpticalConfig& config, double z);
CoordCoeffs coord_coeffs(const MomentumCoeffs& coeffs);

// Per-axis factors. The 2D amplitudes are products of an x and a y factor.
double momentum_factor_norm(const MomentumCoeffs& coeffs);
complex momentum_factor(const MomentumCoeffs& coeffs, double p, double q);
complex coordinate_factor(const CoordCoeffs& coeffs, double xs, double xi);

complex mode_function_momentum(const MomentumCoeffs& coeffs, const Vec2& p, const Vec2& q);
complex wave_function_coord(const CoordCoeffs& coeffs, const Vec2& xs, const Vec2& xi);

/// |sinc(b x^2) - exp(-alpha b x^2)| with sinc(u) = sin(u)/u.
double sinc_gaussian_residual(double b, double x, double alpha = kDefaultAlpha);

}  // namespace spdc

#pragma once

#include <vector>

#include "spdc/model.hpp"

namespace spdc {

inline constexpr double kDefaultTailCutoff = 1e-14;
inline constexpr double kDefaultRootTolerance = 1e-6;  // m

/// Reduced density matrix parameters of one transverse axis and the
/// resulting Schmidt numbers. The spectrum is lambda_n = lambda_0 w^n.
struct SchmidtData {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double w = 0.0;
    double K1d = 1.0;  // c/a
    double K = 1.0;    // (c/a)^2, both transverse axes
};

SchmidtData schmidt_params(complex A, complex B);

/// Closed-form Schmidt number
/// ([Re(A+B)]^2 + [Im(A-B)]^2) / ([Re(A+B)]^2 - [Re(A-B)]^2).
double schmidt_number(complex A, complex B);
double schmidt_number(const OpticalConfig& config, double z = 0.0);

/// 1D eigenvalues lambda_n, truncated once lambda_n < tail_cutoff * lambda_0.
std::vector<double> schmidt_spectrum(const SchmidtData& data, double tail_cutoff = kDefaultTailCutoff);

/// Aspect ratio of the coincidence distribution in the (x_s+x_i, x_s-x_i)
/// plane; 1 means the coordinate-space modulus factorizes.
double ellipticity(const OpticalConfig& config, double z);

/// Smallest z in [0, z_max] with ellipticity(z) = 1. Throws Error(NoRoot)
/// when e(z) - 1 keeps its sign over the range.
double find_migration_point(const OpticalConfig& config, double z_max,
                            double tolerance = kDefaultRootTolerance);

/// (1 + e)^2 / (4 e): unconditional over conditional variance of a
/// two-variable Gaussian with principal-axis ratio e.
double fedorov_from_ellipticity(double e);
double fedorov_coordinate(const OpticalConfig& config, double z);
double fedorov_momentum(const OpticalConfig& config, double z);

struct PortProbabilities {
    double plus = 0.0;
    double minus = 0.0;
};

PortProbabilities interferometer_probabilities(complex A, complex B);
double entanglement_from_probabilities(double p_plus, double p_minus);

/// Envelope and fringe constants of P_diff = N2 exp(-R+(xs^2+xi^2)) cos(2 I- xs.xi).
struct FringeParams {
    double r_plus = 0.0;
    double i_minus = 0.0;
    double norm2 = 0.0;
};

FringeParams fringe_params(const OpticalConfig& config, double z);
FringeParams fringe_params(const MomentumCoeffs& coeffs);

double p_diff(const FringeParams& params, const Vec2& xs, const Vec2& xi);

struct FringeMaximum {
    double x_s = 0.0;    // position along the slice (x_s, 0; x_i, 0)
    double phase = 0.0;  // 2 I- x_s x_i, reported in radians
};

/// order-th local maximum (order >= 2; the peak at x_s = 0 is order 1) of
/// P_diff along the slice (x_s, 0; x_i, 0) for x_s > 0 when I- x_i > 0.
FringeMaximum locate_fringe_maximum(const FringeParams& params, double x_i, int order);

}  // namespace spdc

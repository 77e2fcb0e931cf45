#pragma once

#include <cstddef>
#include <vector>

#include "spdc/model.hpp"
#include "spdc/schmidt.hpp"

namespace spdc {

inline constexpr int kDefaultGridPoints = 512;
inline constexpr double kDefaultHalfwidthFactor = 6.0;

enum class Space { Momentum, Coordinate };

/// Square sampling of one transverse axis for both photons. Samples sit at
/// cell centres, x_j = -half_width + (j + 1/2) spacing, so the grid is mirror
/// symmetric: x_{n-1-j} = -x_j.
struct GridSpec {
    int points = kDefaultGridPoints;
    double half_width = 0.0;  // m or 1/m depending on the space

    void validate() const;
    double spacing() const { return 2.0 * half_width / points; }
    double coordinate(int j) const { return -half_width + (j + 0.5) * spacing(); }
    int mirror(int j) const { return points - 1 - j; }
};

/// Per-axis biphoton amplitude sampled on a GridSpec. values[i * n + j] holds
/// the amplitude at signal coordinate i and idler coordinate j. For a
/// normalized field sum |value|^2 * weight() = 1.
struct GridField {
    Space space = Space::Momentum;
    GridSpec grid;
    std::vector<complex> values;

    int size() const { return grid.points; }
    double weight() const { return grid.spacing() * grid.spacing(); }
    complex& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.points + j]; }
    const complex& at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.points + j]; }
};

/// Marginal (single-photon) intensity standard deviation of one axis.
double marginal_width(const OpticalConfig& config, double z, Space space);
/// Full 1/e^2 amplitude diameter of the narrowest conditional cross-section.
double conditional_diameter(const OpticalConfig& config, double z, Space space);

GridSpec default_grid(const OpticalConfig& config, double z, Space space, int points = kDefaultGridPoints,
                      double halfwidth_factor = kDefaultHalfwidthFactor);

/// Throws Error(InvalidArgument) if the grid half-width is below 5 marginal
/// widths, Error(GridTooCoarse) if the conditional diameter spans < 8 cells.
GridField sample_momentum_grid(const OpticalConfig& config, double z, const GridSpec& grid);
GridField sample_coordinate_grid(const OpticalConfig& config, double z, const GridSpec& grid);

/// |sum |value|^2 weight - 1|.
double normalization_check(const GridField& field);

/// Fraction of the field norm lying in the outer `band` fraction of either axis.
double outer_band_fraction(const GridField& field, double band = 0.1);

/// Discrete version of Psi(xs, xi) = (1/2pi) int dp dq Phi(p, q) exp(i p xs + i q xi)
/// on the reciprocal centred grid (half_width = pi / dp). Includes the
/// half-sample phase factors so it samples the continuous transform exactly
/// up to truncation and aliasing. Throws Error(AliasingRisk) when more than
/// 1e-6 of the norm lands in the outer 10% band.
GridField transform_to_coordinate(const GridField& momentum_field);

struct NumericSchmidt {
    std::vector<double> eigenvalues;  // descending, sum = 1
    double K1d = 1.0;
    double K = 1.0;  // K1d^2 for the isotropic 2D state
};

/// SVD of the per-axis amplitude matrix (values * sqrt(weight)).
NumericSchmidt numeric_schmidt(const GridField& field);

struct NumericMoments {
    double marginal_variance = 0.0;
    double conditional_variance = 0.0;
    double fedorov = 1.0;
};

/// Signal-photon variances by quadrature; the conditional one uses the idler
/// row nearest coordinate 0.
NumericMoments numeric_moments(const GridField& field);

/// Points per axis that resolve the sampled kernel for the SVD and moment
/// oracles: enough cells for every Schmidt mode above 1e-8 of the leading
/// one and for the modulus rule at the default half-width, rounded up to a
/// multiple of 64 with a floor of 256. Throws Error(GridTooCoarse) above
/// max_points.
int oracle_grid_points(const OpticalConfig& config, double z, Space space, int max_points = 2048);

struct PrincipalAxes {
    double ratio = 1.0;  // major/minor standard deviation of |value|^2
    double angle = 0.0;  // major axis from the signal axis [rad], in (-pi/2, pi/2]
};

/// Second-moment ellipse of the (signal, idler) intensity map.
PrincipalAxes principal_axes(const GridField& field);

/// Quadrature of P_diff over both photons and both transverse axes.
double fringe_quadrature(const FringeParams& params);

}  // namespace spdc

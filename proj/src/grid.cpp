#include "spdc/grid.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "spdc/error.hpp"

namespace spdc {

namespace {

constexpr double kMinHalfwidthSigmas = 5.0;
constexpr double kMinCellsPerDiameter = 8.0;
constexpr double kNormalizationTolerance = 1e-3;
constexpr double kAliasingTolerance = 1e-6;
constexpr int kMinResolvedSliceCells = 16;

// FFTW planning is not thread safe.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void check_sampling(const OpticalConfig& config, double z, const GridSpec& grid, Space space) {
    grid.validate();
    const double sigma = marginal_width(config, z, space);
    if (grid.half_width < kMinHalfwidthSigmas * sigma * (1.0 - 1e-12))
        throw Error(ErrorCode::InvalidArgument,
                    "grid half-width " + std::to_string(grid.half_width) + " is below 5 marginal widths (" +
                        std::to_string(kMinHalfwidthSigmas * sigma) + ")");
    const double cells = conditional_diameter(config, z, space) / grid.spacing();
    if (cells < kMinCellsPerDiameter)
        throw Error(ErrorCode::GridTooCoarse, "grid too coarse: narrow feature spans " + std::to_string(cells) +
                                                  " cells (need >= 8); raise grid points");
}

double norm_sum(const GridField& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    return s * f.weight();
}

// Mean and variance of a discrete density over the grid coordinates.
std::pair<double, double> moments(const GridSpec& grid, const std::vector<double>& density) {
    double total = 0.0;
    double first = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        total += density[i];
        first += density[i] * grid.coordinate(i);
    }
    const double mean = first / total;
    double second = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        const double d = grid.coordinate(i) - mean;
        second += density[i] * d * d;
    }
    return {mean, second / total};
}

}  // namespace

void GridSpec::validate() const {
    if (points < 16 || points % 2 != 0)
        throw Error(ErrorCode::InvalidArgument,
                    "grid points must be even and >= 16 (got " + std::to_string(points) + ")");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw Error(ErrorCode::InvalidArgument, "grid half-width must be > 0");
}

double marginal_width(const OpticalConfig& config, double z, Space space) {
    const auto c = coord_coeffs(config, z);
    // Variances of the sum and difference coordinates of |amplitude|^2.
    const double var_sum = space == Space::Momentum ? 1.0 / c.re_a : c.gamma / c.re_a;
    const double var_diff = space == Space::Momentum ? 1.0 / c.re_b : c.beta / c.re_b;
    return 0.5 * std::sqrt(var_sum + var_diff);
}

double conditional_diameter(const OpticalConfig& config, double z, Space space) {
    const auto c = coord_coeffs(config, z);
    // |amplitude| = exp(-u (s - i)^2 - v (s + i)^2); at fixed idler the signal
    // profile is exp(-(u + v) s^2), which falls to 1/e^2 at (u + v) s^2 = 2.
    const double u = space == Space::Momentum ? c.re_b / 4.0 : c.re_b / (4.0 * c.beta);
    const double v = space == Space::Momentum ? c.re_a / 4.0 : c.re_a / (4.0 * c.gamma);
    return 2.0 * std::sqrt(2.0 / (u + v));
}

GridSpec default_grid(const OpticalConfig& config, double z, Space space, int points, double halfwidth_factor) {
    if (!(halfwidth_factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "halfwidth factor must be > 0");
    GridSpec g{points, halfwidth_factor * marginal_width(config, z, space)};
    g.validate();
    return g;
}

GridField sample_momentum_grid(const OpticalConfig& config, double z, const GridSpec& grid) {
    check_sampling(config, z, grid, Space::Momentum);
    const auto m = momentum_coeffs(config, z);
    GridField f{Space::Momentum, grid, std::vector<complex>(static_cast<std::size_t>(grid.points) * grid.points)};
    for (int i = 0; i < grid.points; ++i)
        for (int j = 0; j < grid.points; ++j) f.at(i, j) = momentum_factor(m, grid.coordinate(i), grid.coordinate(j));
    return f;
}

GridField sample_coordinate_grid(const OpticalConfig& config, double z, const GridSpec& grid) {
    check_sampling(config, z, grid, Space::Coordinate);
    const auto c = coord_coeffs(config, z);
    GridField f{Space::Coordinate, grid, std::vector<complex>(static_cast<std::size_t>(grid.points) * grid.points)};
    for (int i = 0; i < grid.points; ++i)
        for (int j = 0; j < grid.points; ++j) f.at(i, j) = coordinate_factor(c, grid.coordinate(i), grid.coordinate(j));
    return f;
}

double normalization_check(const GridField& field) { return std::abs(norm_sum(field) - 1.0); }

double outer_band_fraction(const GridField& field, double band) {
    const int n = field.size();
    const double edge = (1.0 - band) * field.grid.half_width;
    double outer = 0.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const bool out_i = std::abs(field.grid.coordinate(i)) > edge;
        for (int j = 0; j < n; ++j) {
            const double p = std::norm(field.at(i, j));
            total += p;
            if (out_i || std::abs(field.grid.coordinate(j)) > edge) outer += p;
        }
    }
    return total > 0.0 ? outer / total : 0.0;
}

GridField transform_to_coordinate(const GridField& in) {
    if (in.space != Space::Momentum)
        throw Error(ErrorCode::InvalidArgument, "transform_to_coordinate expects a momentum-space field");
    in.grid.validate();
    const int n = in.size();
    const double dp = in.grid.spacing();

    // p_j = (j - c) dp, x_m = (m - c) dx with c = (n - 1)/2 and dp dx = 2 pi/n, so
    // p_j x_m = 2 pi/n (j m - c j - c m + c^2).
    const double c = 0.5 * (n - 1);
    std::vector<complex> twiddle(n);
    for (int j = 0; j < n; ++j) twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * c * j / n);
    const complex global = std::polar(dp * dp / (2.0 * std::numbers::pi), 2.0 * 2.0 * std::numbers::pi * c * c / n);

    GridField out{Space::Coordinate, GridSpec{n, std::numbers::pi / dp}, {}};
    out.values.resize(in.values.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = in.at(i, j) * twiddle[i] * twiddle[j];

    auto* data = reinterpret_cast<fftw_complex*>(out.values.data());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(n, n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) *= global * twiddle[i] * twiddle[j];

    const double outer = outer_band_fraction(out, 0.1);
    if (outer > kAliasingTolerance)
        throw Error(ErrorCode::AliasingRisk, "aliasing risk: " + std::to_string(outer) +
                                                 " of the transformed norm lies in the outer 10% band");
    return out;
}

NumericSchmidt numeric_schmidt(const GridField& field) {
    field.grid.validate();
    const double deviation = normalization_check(field);
    if (deviation > kNormalizationTolerance)
        throw Error(ErrorCode::Unnormalized, "field is not normalized (deviation " + std::to_string(deviation) + ")");

    const int n = field.size();
    using RowMajor = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> values(field.values.data(), n, n);
    const Eigen::MatrixXcd kernel = values * std::sqrt(field.weight());

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(kernel);
    if (svd.info() != Eigen::Success) throw Error(ErrorCode::Numeric, "SVD failed on the sampled amplitude");

    const auto& sigma = svd.singularValues();
    NumericSchmidt result;
    result.eigenvalues.reserve(sigma.size());
    double trace = 0.0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) trace += sigma[k] * sigma[k];
    double purity = 0.0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        const double lambda = sigma[k] * sigma[k] / trace;
        result.eigenvalues.push_back(lambda);
        purity += lambda * lambda;
    }
    result.K1d = 1.0 / purity;
    result.K = result.K1d * result.K1d;
    return result;
}

NumericMoments numeric_moments(const GridField& field) {
    field.grid.validate();
    const int n = field.size();

    std::vector<double> marginal(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) marginal[i] += std::norm(field.at(i, j));

    // Cell centres straddle 0; take the row just above it.
    const int row = n / 2;
    std::vector<double> slice(n);
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
        slice[i] = std::norm(field.at(i, row));
        peak = std::max(peak, slice[i]);
    }
    const auto resolved = std::count_if(slice.begin(), slice.end(), [&](double v) { return v > 1e-6 * peak; });
    if (resolved < kMinResolvedSliceCells)
        throw Error(ErrorCode::Underresolved, "conditional slice underresolved: " + std::to_string(resolved) +
                                                  " cells above 1e-6 of peak (need >= 16)");

    NumericMoments m;
    m.marginal_variance = moments(field.grid, marginal).second;
    m.conditional_variance = moments(field.grid, slice).second;
    m.fedorov = m.marginal_variance / m.conditional_variance;
    return m;
}

int oracle_grid_points(const OpticalConfig& config, double z, Space space, int max_points) {
    const auto m = momentum_coeffs(config, z);
    const auto modes = schmidt_spectrum(schmidt_params(m.A, m.B), 1e-8).size();

    const double halfwidth = kDefaultHalfwidthFactor * marginal_width(config, z, space);
    const double modulus_points = kMinCellsPerDiameter * 2.0 * halfwidth / conditional_diameter(config, z, space);

    const double needed = std::max({256.0, static_cast<double>(modes), modulus_points});
    const int points = 64 * static_cast<int>(std::ceil(needed / 64.0));
    if (points > max_points)
        throw Error(ErrorCode::GridTooCoarse, "state needs " + std::to_string(points) +
                                                  " points per axis, above the limit of " +
                                                  std::to_string(max_points));
    return points;
}

double fringe_quadrature(const FringeParams& f) {
    if (!(f.r_plus > 0.0)) throw Error(ErrorCode::InvalidArgument, "R+ must be > 0");
    // P_diff integrates to norm2 * S^2 with S the single-axis integral of
    // exp(-R (x^2 + y^2)) cos(2 I x y); the sin.sin cross term is odd.
    const double half_width = 7.0 / std::sqrt(f.r_plus);
    // Keep the local fringe phase step at the band edge below pi/4.
    const double fringe_points = 16.0 * std::abs(f.i_minus) * half_width * half_width / std::numbers::pi;
    const int n = 2 * static_cast<int>(std::ceil(std::max(256.0, fringe_points) / 2.0));
    if (n > 16384) throw Error(ErrorCode::GridTooCoarse, "fringe pattern too dense for quadrature");

    const GridSpec g{n, half_width};
    std::vector<double> envelope(n);
    for (int i = 0; i < n; ++i) envelope[i] = std::exp(-f.r_plus * g.coordinate(i) * g.coordinate(i));
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            row += envelope[j] * std::cos(2.0 * f.i_minus * g.coordinate(i) * g.coordinate(j));
        s += envelope[i] * row;
    }
    s *= g.spacing() * g.spacing();
    return f.norm2 * s * s;
}

PrincipalAxes principal_axes(const GridField& field) {
    field.grid.validate();
    const int n = field.size();
    double total = 0.0, sss = 0.0, sii = 0.0, ssi = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = field.grid.coordinate(i);
        for (int j = 0; j < n; ++j) {
            const double t = field.grid.coordinate(j);
            const double p = std::norm(field.at(i, j));
            total += p;
            sss += p * s * s;
            sii += p * t * t;
            ssi += p * s * t;
        }
    }
    if (!(total > 0.0)) throw Error(ErrorCode::Degenerate, "map has zero total intensity");
    sss /= total;
    sii /= total;
    ssi /= total;
    // Grid is centred, so these are central moments up to the odd-symmetric mean (zero).
    const double mean = 0.5 * (sss + sii);
    const double spread = std::hypot(0.5 * (sss - sii), ssi);
    PrincipalAxes axes;
    axes.ratio = std::sqrt((mean + spread) / (mean - spread));
    axes.angle = 0.5 * std::atan2(2.0 * ssi, sss - sii);
    return axes;
}

}  // namespace spdc

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "spdc/error.hpp"
#include "spdc/grid.hpp"
#include "spdc/interferometer.hpp"
#include "spdc/model.hpp"
#include "spdc/schmidt.hpp"
#include "spdc/spdc.h"
#include "spdc/validation.hpp"

struct spdc_config {
    spdc::OpticalConfig value;
};

struct spdc_field {
    spdc::GridField value;
};

struct spdc_interferometer {
    spdc::InterferometerRun value;
};

namespace {

thread_local std::string g_last_error;

spdc_status fail(spdc_status status, const char* message) {
    g_last_error = message;
    return status;
}

spdc_status from_code(spdc::ErrorCode code) {
    return static_cast<spdc_status>(static_cast<int>(code));
}

// Runs body, translating exceptions to status codes.
template <class F>
spdc_status guarded(F&& body) noexcept {
    try {
        body();
        return SPDC_OK;
    } catch (const spdc::Error& e) {
        return fail(from_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SPDC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SPDC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SPDC_ERR_INTERNAL, "unknown error");
    }
}


template <class... Ptrs>
bool any_null(const Ptrs*... ptrs) {
    return ((ptrs == nullptr) || ...);
}

spdc::OpticalConfig to_config(const spdc_optical_params& p) {
    spdc::OpticalConfig c;
    c.crystal_length = p.crystal_length;
    c.pump_waist = p.pump_waist;
    c.pump_wavelength = p.pump_wavelength;
    c.pump_refractive_index = p.pump_refractive_index;
    c.pump_inverse_curvature = p.pump_inverse_curvature;
    c.alpha = p.alpha;
    return c;
}

spdc_optical_params to_params(const spdc::OpticalConfig& c) {
    return {c.crystal_length, c.pump_waist, c.pump_wavelength, c.pump_refractive_index, c.pump_inverse_curvature,
            c.alpha};
}

spdc::Space to_space(spdc_space s) {
    switch (s) {
        case SPDC_SPACE_MOMENTUM: return spdc::Space::Momentum;
        case SPDC_SPACE_COORDINATE: return spdc::Space::Coordinate;
    }
    throw spdc::Error(spdc::ErrorCode::InvalidArgument, "unknown space");
}

void require_capacity(size_t capacity, size_t needed) {
    if (capacity < needed)
        throw spdc::Error(static_cast<spdc::ErrorCode>(SPDC_ERR_BUFFER_TOO_SMALL),
                          "buffer too small: need " + std::to_string(needed) + " elements");
}

#define SPDC_REQUIRE_NONNULL(...) \
    if (any_null(__VA_ARGS__)) return fail(SPDC_ERR_NULL_POINTER, "null pointer argument")

}  // namespace

extern "C" {

const char* spdc_last_error(void) { return g_last_error.c_str(); }

const char* spdc_status_string(spdc_status status) {
    switch (status) {
        case SPDC_OK: return "ok";
        case SPDC_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SPDC_ERR_OUT_OF_DOMAIN: return "out of domain";
        case SPDC_ERR_NO_ROOT: return "no migration point";
        case SPDC_ERR_GRID_TOO_COARSE: return "grid too coarse";
        case SPDC_ERR_ALIASING: return "aliasing risk";
        case SPDC_ERR_UNDERRESOLVED: return "underresolved";
        case SPDC_ERR_UNNORMALIZED: return "unnormalized field";
        case SPDC_ERR_DEGENERATE: return "degenerate ports";
        case SPDC_ERR_NOT_FOUND: return "not found";
        case SPDC_ERR_NUMERIC: return "numerical failure";
        case SPDC_ERR_NULL_POINTER: return "null pointer";
        case SPDC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case SPDC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void spdc_default_params(spdc_optical_params* out) {
    if (out) *out = to_params(spdc::OpticalConfig{});
}

void spdc_reference_params(spdc_optical_params* out) {
    if (out) *out = to_params(spdc::OpticalConfig::reference());
}

spdc_status spdc_config_create(const spdc_optical_params* params, spdc_config** out) {
    SPDC_REQUIRE_NONNULL(params, out);
    *out = nullptr;
    return guarded([&] {
        auto c = to_config(*params);
        c.validate();
        *out = new spdc_config{c};
    });
}

void spdc_config_destroy(spdc_config* config) { delete config; }

spdc_status spdc_config_params(const spdc_config* config, spdc_optical_params* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    *out = to_params(config->value);
    return SPDC_OK;
}

spdc_status spdc_balanced_inverse_curvature(const spdc_optical_params* params, double* out) {
    SPDC_REQUIRE_NONNULL(params, out);
    return guarded([&] { *out = spdc::balanced_inverse_curvature(to_config(*params)); });
}

spdc_status spdc_pump_wavenumber(const spdc_config* config, double* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] { *out = spdc::pump_wavenumber(config->value); });
}

spdc_status spdc_momentum_coeffs_at(const spdc_config* config, double z, spdc_momentum_coeffs* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] {
        const auto m = spdc::momentum_coeffs(config->value, z);
        *out = {m.A.real(), m.A.imag(), m.B.real(), m.B.imag(), m.z};
    });
}

spdc_status spdc_coord_coeffs_at(const spdc_config* config, double z, spdc_coord_coeffs* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] {
        const auto c = spdc::coord_coeffs(config->value, z);
        *out = {c.beta, c.gamma, c.mu1, c.mu2, c.norm, c.z};
    });
}

spdc_status spdc_momentum_intensity(const spdc_config* config, double z, const double p[2], const double q[2],
                                    double* out) {
    SPDC_REQUIRE_NONNULL(config, p, q, out);
    return guarded([&] {
        const auto m = spdc::momentum_coeffs(config->value, z);
        *out = std::norm(spdc::mode_function_momentum(m, {p[0], p[1]}, {q[0], q[1]}));
    });
}

spdc_status spdc_coordinate_intensity(const spdc_config* config, double z, const double xs[2], const double xi[2],
                                      double* out) {
    SPDC_REQUIRE_NONNULL(config, xs, xi, out);
    return guarded([&] {
        const auto c = spdc::coord_coeffs(config->value, z);
        *out = std::norm(spdc::wave_function_coord(c, {xs[0], xs[1]}, {xi[0], xi[1]}));
    });
}

spdc_status spdc_sinc_gaussian_residual(double b, double x, double alpha, double* out) {
    SPDC_REQUIRE_NONNULL(out);
    return guarded([&] { *out = spdc::sinc_gaussian_residual(b, x, alpha); });
}

spdc_status spdc_schmidt_params(const spdc_config* config, double z, spdc_schmidt_data* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] {
        const auto m = spdc::momentum_coeffs(config->value, z);
        const auto d = spdc::schmidt_params(m.A, m.B);
        *out = {d.a, d.b, d.c, d.w, d.K1d, d.K};
    });
}

spdc_status spdc_schmidt_number(const spdc_config* config, double z, double* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] { *out = spdc::schmidt_number(config->value, z); });
}

spdc_status spdc_schmidt_spectrum(const spdc_config* config, double tail_cutoff, double* eigenvalues,
                                  size_t capacity, size_t* count) {
    SPDC_REQUIRE_NONNULL(config, count);
    return guarded([&] {
        const auto m = spdc::momentum_coeffs(config->value, 0.0);
        const auto spectrum = spdc::schmidt_spectrum(spdc::schmidt_params(m.A, m.B), tail_cutoff);
        *count = spectrum.size();
        if (eigenvalues) std::copy_n(spectrum.begin(), std::min(capacity, spectrum.size()), eigenvalues);
    });
}

spdc_status spdc_scan_row_at(const spdc_config* config, double z, spdc_scan_row* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] {
        const auto& c = config->value;
        const auto m = spdc::momentum_coeffs(c, z);
        const auto p = spdc::interferometer_probabilities(m.A, m.B);
        *out = {z,
                spdc::ellipticity(c, z),
                spdc::fedorov_coordinate(c, z),
                spdc::fedorov_momentum(c, z),
                spdc::schmidt_number(m.A, m.B),
                p.plus,
                p.minus};
    });
}

spdc_status spdc_find_migration_point(const spdc_config* config, double z_max, double* z0) {
    SPDC_REQUIRE_NONNULL(config, z0);
    return guarded([&] { *z0 = spdc::find_migration_point(config->value, z_max); });
}

spdc_status spdc_entanglement_from_probabilities(double p_plus, double p_minus, double* k) {
    SPDC_REQUIRE_NONNULL(k);
    return guarded([&] { *k = spdc::entanglement_from_probabilities(p_plus, p_minus); });
}

spdc_status spdc_fringe_params_at(const spdc_config* config, double z, spdc_fringe_params* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] {
        const auto f = spdc::fringe_params(config->value, z);
        *out = {f.r_plus, f.i_minus, f.norm2};
    });
}

spdc_status spdc_p_diff(const spdc_fringe_params* params, const double xs[2], const double xi[2], double* out) {
    SPDC_REQUIRE_NONNULL(params, xs, xi, out);
    return guarded([&] {
        *out = spdc::p_diff({params->r_plus, params->i_minus, params->norm2}, {xs[0], xs[1]}, {xi[0], xi[1]});
    });
}

spdc_status spdc_locate_fringe_maximum(const spdc_fringe_params* params, double x_i, int order, double* x_s,
                                       double* phase) {
    SPDC_REQUIRE_NONNULL(params, x_s, phase);
    return guarded([&] {
        const auto m = spdc::locate_fringe_maximum({params->r_plus, params->i_minus, params->norm2}, x_i, order);
        *x_s = m.x_s;
        *phase = m.phase;
    });
}

spdc_status spdc_field_sample(const spdc_config* config, double z, spdc_space space, int points,
                              double halfwidth_factor, spdc_field** out) {
    SPDC_REQUIRE_NONNULL(config, out);
    *out = nullptr;
    return guarded([&] {
        const auto s = to_space(space);
        const auto grid = spdc::default_grid(config->value, z, s, points, halfwidth_factor);
        auto field = s == spdc::Space::Momentum ? spdc::sample_momentum_grid(config->value, z, grid)
                                                : spdc::sample_coordinate_grid(config->value, z, grid);
        *out = new spdc_field{std::move(field)};
    });
}

spdc_status spdc_field_to_coordinate(const spdc_field* momentum_field, spdc_field** out) {
    SPDC_REQUIRE_NONNULL(momentum_field, out);
    *out = nullptr;
    return guarded([&] { *out = new spdc_field{spdc::transform_to_coordinate(momentum_field->value)}; });
}

void spdc_field_destroy(spdc_field* field) { delete field; }

int spdc_field_points(const spdc_field* field) { return field ? field->value.size() : 0; }

spdc_status spdc_field_axis(const spdc_field* field, double* coordinates, size_t capacity) {
    SPDC_REQUIRE_NONNULL(field, coordinates);
    return guarded([&] {
        const auto& g = field->value.grid;
        require_capacity(capacity, static_cast<size_t>(g.points));
        for (int i = 0; i < g.points; ++i) coordinates[i] = g.coordinate(i);
    });
}

spdc_status spdc_field_intensity(const spdc_field* field, double* values, size_t capacity) {
    SPDC_REQUIRE_NONNULL(field, values);
    return guarded([&] {
        const auto& v = field->value.values;
        require_capacity(capacity, v.size());
        std::transform(v.begin(), v.end(), values, [](const spdc::complex& a) { return std::norm(a); });
    });
}

spdc_status spdc_field_normalization_deviation(const spdc_field* field, double* out) {
    SPDC_REQUIRE_NONNULL(field, out);
    return guarded([&] { *out = spdc::normalization_check(field->value); });
}

spdc_status spdc_field_numeric_schmidt(const spdc_field* field, double* k1d, double* k) {
    SPDC_REQUIRE_NONNULL(field, k1d, k);
    return guarded([&] {
        const auto r = spdc::numeric_schmidt(field->value);
        *k1d = r.K1d;
        *k = r.K;
    });
}

spdc_status spdc_field_moments(const spdc_field* field, double* marginal_variance, double* conditional_variance,
                               double* fedorov) {
    SPDC_REQUIRE_NONNULL(field, marginal_variance, conditional_variance, fedorov);
    return guarded([&] {
        const auto m = spdc::numeric_moments(field->value);
        *marginal_variance = m.marginal_variance;
        *conditional_variance = m.conditional_variance;
        *fedorov = m.fedorov;
    });
}

spdc_status spdc_field_principal_axes(const spdc_field* field, double* ratio, double* angle) {
    SPDC_REQUIRE_NONNULL(field, ratio, angle);
    return guarded([&] {
        const auto axes = spdc::principal_axes(field->value);
        *ratio = axes.ratio;
        *angle = axes.angle;
    });
}

spdc_status spdc_marginal_width(const spdc_config* config, double z, spdc_space space, double* out) {
    SPDC_REQUIRE_NONNULL(config, out);
    return guarded([&] { *out = spdc::marginal_width(config->value, z, to_space(space)); });
}

spdc_status spdc_oracle_grid_points(const spdc_config* config, double z, spdc_space space, int* points) {
    SPDC_REQUIRE_NONNULL(config, points);
    return guarded([&] { *points = spdc::oracle_grid_points(config->value, z, to_space(space)); });
}

spdc_status spdc_interferometer_run(const spdc_field* x_field, const spdc_field* y_field, double theta1,
                                    double theta2, spdc_interferometer** out) {
    SPDC_REQUIRE_NONNULL(x_field, y_field, out);
    *out = nullptr;
    return guarded([&] {
        *out = new spdc_interferometer{spdc::simulate_interferometer(x_field->value, y_field->value, theta1, theta2)};
    });
}

void spdc_interferometer_destroy(spdc_interferometer* run) { delete run; }

spdc_status spdc_interferometer_probabilities(const spdc_interferometer* run, double* p_plus, double* p_minus) {
    SPDC_REQUIRE_NONNULL(run, p_plus, p_minus);
    *p_plus = run->value.probabilities.plus;
    *p_minus = run->value.probabilities.minus;
    return SPDC_OK;
}

spdc_status spdc_interferometer_map(const spdc_interferometer* run, int port, double* values, size_t capacity) {
    SPDC_REQUIRE_NONNULL(run, values);
    if (port != 0 && port != 1) return fail(SPDC_ERR_INVALID_ARGUMENT, "port must be 0 (a) or 1 (b)");
    return guarded([&] {
        const auto& map = port == 0 ? run->value.map_a : run->value.map_b;
        require_capacity(capacity, map.size());
        std::copy(map.begin(), map.end(), values);
    });
}

spdc_status spdc_interferometer_parity_deviation(const spdc_field* x_field, const spdc_field* y_field, int samples,
                                                 uint32_t seed, double* out) {
    SPDC_REQUIRE_NONNULL(x_field, y_field, out);
    return guarded([&] { *out = spdc::parity_form_deviation(x_field->value, y_field->value, samples, seed); });
}

spdc_status spdc_interferometer_point(const spdc_config* config, double z, double theta1, double theta2,
                                      const double xs[2], const double xi[2], double* port_a, double* port_b) {
    SPDC_REQUIRE_NONNULL(config, xs, xi, port_a, port_b);
    return guarded([&] {
        const auto psi = spdc::analytic_biphoton(config->value, z);
        const auto ports = spdc::compose_interferometer(theta1, theta2);
        *port_a = spdc::port_intensity(ports.a, psi, {xs[0], xs[1]}, {xi[0], xi[1]});
        *port_b = spdc::port_intensity(ports.b, psi, {xs[0], xs[1]}, {xi[0], xi[1]});
    });
}

spdc_status spdc_validate(const spdc_optical_params* params, int grid_points, uint64_t seed,
                          spdc_check_callback callback, void* user_data, int* failures) {
    SPDC_REQUIRE_NONNULL(params, failures);
    return guarded([&] {
        spdc::ValidationOptions options;
        options.grid_points = grid_points;
        options.seed = seed;
        const auto results = spdc::run_validation(to_config(*params), options);
        int failed = 0;
        for (const auto& r : results) {
            if (!r.passed) ++failed;
            if (callback) {
                const spdc_check c{r.section.c_str(), r.name.c_str(), r.measured, r.tolerance, r.passed ? 1 : 0};
                callback(&c, user_data);
            }
        }
        *failures = failed;
    });
}

}  // extern "C"

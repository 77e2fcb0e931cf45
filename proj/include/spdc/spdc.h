/*
 * C interface to the SPDC transverse-entanglement toolkit.
 *
 * Every function returns an spdc_status. On failure the thread-local message
 * from spdc_last_error() describes the cause. Handles are opaque and owned by
 * the caller; release them with the matching *_destroy function (passing NULL
 * is allowed). Units are SI throughout.
 */
#ifndef SPDC_SPDC_H
#define SPDC_SPDC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPDC_BUILDING_LIBRARY)
#    define SPDC_API __declspec(dllexport)
#  else
#    define SPDC_API __declspec(dllimport)
#  endif
#else
#  define SPDC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spdc_status {
    SPDC_OK = 0,
    SPDC_ERR_INVALID_ARGUMENT = 1,
    SPDC_ERR_OUT_OF_DOMAIN = 2,
    SPDC_ERR_NO_ROOT = 3,
    SPDC_ERR_GRID_TOO_COARSE = 4,
    SPDC_ERR_ALIASING = 5,
    SPDC_ERR_UNDERRESOLVED = 6,
    SPDC_ERR_UNNORMALIZED = 7,
    SPDC_ERR_DEGENERATE = 8,
    SPDC_ERR_NOT_FOUND = 9,
    SPDC_ERR_NUMERIC = 10,
    SPDC_ERR_NULL_POINTER = 11,
    SPDC_ERR_BUFFER_TOO_SMALL = 12,
    SPDC_ERR_INTERNAL = 99
} spdc_status;

typedef enum spdc_space { SPDC_SPACE_MOMENTUM = 0, SPDC_SPACE_COORDINATE = 1 } spdc_space;

typedef struct spdc_optical_params {
    double crystal_length;         /* L [m] */
    double pump_waist;             /* w0 [m] */
    double pump_wavelength;        /* lambda_p [m] */
    double pump_refractive_index;  /* n_p */
    double pump_inverse_curvature; /* 1/R [1/m], 0 = collimated */
    double alpha;                  /* sinc -> Gaussian constant, 0.455 */
} spdc_optical_params;

typedef struct spdc_momentum_coeffs {
    double a_re, a_im; /* A [m^2] */
    double b_re, b_im; /* B [m^2] */
    double z;
} spdc_momentum_coeffs;

typedef struct spdc_coord_coeffs {
    double beta, gamma, mu1, mu2, norm, z;
} spdc_coord_coeffs;

typedef struct spdc_schmidt_data {
    double a, b, c, w, k1d, k;
} spdc_schmidt_data;

/* One row of a propagation scan. */
typedef struct spdc_scan_row {
    double z;
    double ellipticity;
    double fedorov_x;
    double fedorov_p;
    double schmidt_k;
    double p_plus;
    double p_minus;
} spdc_scan_row;

typedef struct spdc_fringe_params {
    double r_plus;  /* envelope decay [1/m^2] */
    double i_minus; /* fringe coupling [1/m^2] */
    double norm2;
} spdc_fringe_params;

typedef struct spdc_check {
    const char* section;
    const char* name;
    double measured;
    double tolerance;
    int passed;
} spdc_check;

typedef void (*spdc_check_callback)(const spdc_check* check, void* user_data);

typedef struct spdc_config spdc_config;
typedef struct spdc_field spdc_field;
typedef struct spdc_interferometer spdc_interferometer;

SPDC_API const char* spdc_last_error(void);
SPDC_API const char* spdc_status_string(spdc_status status);
SPDC_API void spdc_default_params(spdc_optical_params* out);
SPDC_API void spdc_reference_params(spdc_optical_params* out);

/* Configuration */
SPDC_API spdc_status spdc_config_create(const spdc_optical_params* params, spdc_config** out);
SPDC_API void spdc_config_destroy(spdc_config* config);
SPDC_API spdc_status spdc_config_params(const spdc_config* config, spdc_optical_params* out);

/* Analytic model */
/* 1/R making mu1 = mu2 for the remaining parameters of *params. */
SPDC_API spdc_status spdc_balanced_inverse_curvature(const spdc_optical_params* params, double* out);
SPDC_API spdc_status spdc_pump_wavenumber(const spdc_config* config, double* out);
SPDC_API spdc_status spdc_momentum_coeffs_at(const spdc_config* config, double z, spdc_momentum_coeffs* out);
SPDC_API spdc_status spdc_coord_coeffs_at(const spdc_config* config, double z, spdc_coord_coeffs* out);
SPDC_API spdc_status spdc_momentum_intensity(const spdc_config* config, double z, const double p[2],
                                             const double q[2], double* out);
SPDC_API spdc_status spdc_coordinate_intensity(const spdc_config* config, double z, const double xs[2],
                                               const double xi[2], double* out);

/* |sinc(b x^2) - exp(-alpha b x^2)| */
SPDC_API spdc_status spdc_sinc_gaussian_residual(double b, double x, double alpha, double* out);

/* Entanglement analytics */
SPDC_API spdc_status spdc_schmidt_params(const spdc_config* config, double z, spdc_schmidt_data* out);
SPDC_API spdc_status spdc_schmidt_number(const spdc_config* config, double z, double* out);
/* Writes up to capacity eigenvalues; *count receives the full spectrum length. */
SPDC_API spdc_status spdc_schmidt_spectrum(const spdc_config* config, double tail_cutoff, double* eigenvalues,
                                           size_t capacity, size_t* count);
SPDC_API spdc_status spdc_scan_row_at(const spdc_config* config, double z, spdc_scan_row* out);
SPDC_API spdc_status spdc_find_migration_point(const spdc_config* config, double z_max, double* z0);
SPDC_API spdc_status spdc_entanglement_from_probabilities(double p_plus, double p_minus, double* k);
SPDC_API spdc_status spdc_fringe_params_at(const spdc_config* config, double z, spdc_fringe_params* out);
SPDC_API spdc_status spdc_p_diff(const spdc_fringe_params* params, const double xs[2], const double xi[2],
                                 double* out);
/* Position and phase 2 I- x_s x_i of the order-th maximum along (x_s, 0; x_i, 0). */
SPDC_API spdc_status spdc_locate_fringe_maximum(const spdc_fringe_params* params, double x_i, int order,
                                                double* x_s, double* phase);

/* Grid oracle. halfwidth_factor multiplies the marginal width; points must be even, >= 16. */
SPDC_API spdc_status spdc_field_sample(const spdc_config* config, double z, spdc_space space, int points,
                                       double halfwidth_factor, spdc_field** out);
SPDC_API spdc_status spdc_field_to_coordinate(const spdc_field* momentum_field, spdc_field** out);
SPDC_API void spdc_field_destroy(spdc_field* field);
SPDC_API int spdc_field_points(const spdc_field* field);
SPDC_API spdc_status spdc_field_axis(const spdc_field* field, double* coordinates, size_t capacity);
/* |value|^2 on the per-axis grid, row-major [signal][idler]. */
SPDC_API spdc_status spdc_field_intensity(const spdc_field* field, double* values, size_t capacity);
SPDC_API spdc_status spdc_field_normalization_deviation(const spdc_field* field, double* out);
SPDC_API spdc_status spdc_field_numeric_schmidt(const spdc_field* field, double* k1d, double* k);
SPDC_API spdc_status spdc_field_moments(const spdc_field* field, double* marginal_variance,
                                        double* conditional_variance, double* fedorov);
/* Principal-axis ratio (>= 1) and major-axis angle [rad] of the intensity map. */
SPDC_API spdc_status spdc_field_principal_axes(const spdc_field* field, double* ratio, double* angle);
SPDC_API spdc_status spdc_marginal_width(const spdc_config* config, double z, spdc_space space, double* out);
SPDC_API spdc_status spdc_oracle_grid_points(const spdc_config* config, double z, spdc_space space, int* points);

/* Interferometer simulation on the coordinate grid (Dove angles multiples of pi/2). */
SPDC_API spdc_status spdc_interferometer_run(const spdc_field* x_field, const spdc_field* y_field, double theta1,
                                             double theta2, spdc_interferometer** out);
SPDC_API void spdc_interferometer_destroy(spdc_interferometer* run);
SPDC_API spdc_status spdc_interferometer_probabilities(const spdc_interferometer* run, double* p_plus,
                                                       double* p_minus);
/* Port densities on the (x_s, x_i) plane at y cells nearest 0; port 0 = a, 1 = b. */
SPDC_API spdc_status spdc_interferometer_map(const spdc_interferometer* run, int port, double* values,
                                             size_t capacity);
/* Max relative deviation of the composed ports from the closed parity forms. */
SPDC_API spdc_status spdc_interferometer_parity_deviation(const spdc_field* x_field, const spdc_field* y_field,
                                                          int samples, uint32_t seed, double* out);
/* Composed port densities at arbitrary points using the analytic biphoton. */
SPDC_API spdc_status spdc_interferometer_point(const spdc_config* config, double z, double theta1, double theta2,
                                               const double xs[2], const double xi[2], double* port_a,
                                               double* port_b);

/* Full invariant suite; *failures counts failed checks. */
SPDC_API spdc_status spdc_validate(const spdc_optical_params* params, int grid_points, uint64_t seed,
                                   spdc_check_callback callback, void* user_data, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* SPDC_SPDC_H */

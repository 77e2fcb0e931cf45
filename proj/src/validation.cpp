#include "spdc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spdc/error.hpp"
#include "spdc/grid.hpp"
#include "spdc/interferometer.hpp"
#include "spdc/schmidt.hpp"

namespace spdc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int round_up(double n, int multiple) { return multiple * static_cast<int>(std::ceil(n / multiple)); }

// Points putting `cells` samples across the conditional 1/e^2 diameter.
int resolved_points(const OpticalConfig& config, double z, Space space, double cells, double factor = 6.0) {
    const double h = factor * marginal_width(config, z, space);
    return round_up(2.0 * h * cells / conditional_diameter(config, z, space), 64);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

class Report {
public:
    void check(const std::string& section, const std::string& name, double measured, double tolerance) {
        results_.push_back({section, name, measured, tolerance, measured <= tolerance});
    }
    void check_at_least(const std::string& section, const std::string& name, double measured, double bound) {
        results_.push_back({section, name, measured, bound, measured >= bound});
    }
    void check_true(const std::string& section, const std::string& name, bool ok, double measured = kNaN) {
        results_.push_back({section, name, measured, kNaN, ok});
    }
    void skip(const std::string& section, const std::string& name) {
        results_.push_back({section, name + " (skipped: no migration point within 10 m)", kNaN, kNaN, true});
    }
    // Runs a block; a thrown Error becomes a failed check carrying its message.
    template <class F>
    void guarded(const std::string& section, const std::string& name, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            results_.push_back({section, name + " [error: " + e.what() + "]", kNaN, kNaN, false});
        }
    }
    std::vector<CheckResult> take() { return std::move(results_); }

private:
    std::vector<CheckResult> results_;
};

std::vector<double> scan_points(double z_end, int steps) {
    std::vector<double> zs;
    for (int i = 0; i < steps; ++i) zs.push_back(z_end * i / (steps - 1));
    return zs;
}

void core_model_checks(Report& r, const OpticalConfig& config, std::mt19937_64& rng, int grid_points) {
    const std::string s = "core-model";
    const auto zs = scan_points(0.5, 51);

    double duality = 0.0, re_drift = 0.0, mu_drift = 0.0;
    const auto m0 = momentum_coeffs(config, 0.0);
    const double mu_gap0 = m0.A.imag() - m0.B.imag();
    for (double z : zs) {
        const auto m = momentum_coeffs(config, z);
        const auto c = coord_coeffs(config, z);
        duality = std::max({duality, rel(c.beta, std::norm(m.B)), rel(c.gamma, std::norm(m.A))});
        re_drift = std::max({re_drift, std::abs(m.A.real() - m0.A.real()), std::abs(m.B.real() - m0.B.real())});
        const double scale = std::max(std::abs(m.A.imag()), std::abs(m.B.imag()));
        mu_drift = std::max(mu_drift, std::abs((m.A.imag() - m.B.imag()) - mu_gap0) / scale);
    }
    r.check(s, "beta = |B|^2 and gamma = |A|^2 over z in [0, 0.5] m (relative)", duality, 1e-12);
    r.check(s, "Re(A), Re(B) identical for all z", re_drift, 0.0);
    r.check(s, "mu1 - mu2 constant in z (relative to max |mu|)", mu_drift, 1e-15);

    const auto cc = coord_coeffs(config, 0.1);
    const double sp = marginal_width(config, 0.0, Space::Momentum);
    const double sx = marginal_width(config, 0.1, Space::Coordinate);
    std::normal_distribution<double> unit(0.0, 1.0);
    double swap = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Vec2 p{sp * unit(rng), sp * unit(rng)}, q{sp * unit(rng), sp * unit(rng)};
        swap = std::max(swap, rel(std::abs(mode_function_momentum(m0, p, q)), std::abs(mode_function_momentum(m0, q, p))));
        const Vec2 a{sx * unit(rng), sx * unit(rng)}, b{sx * unit(rng), sx * unit(rng)};
        swap = std::max(swap, rel(std::abs(wave_function_coord(cc, a, b)), std::abs(wave_function_coord(cc, b, a))));
    }
    r.check(s, "exchange symmetry |Phi(p,q)| = |Phi(q,p)|, |Psi(xs,xi)| = |Psi(xi,xs)|", swap, 1e-12);

    r.guarded(s, "grid normalization", [&] {
        const int n = std::max(grid_points, oracle_grid_points(config, 0.0, Space::Momentum));
        const auto mf = sample_momentum_grid(config, 0.0, default_grid(config, 0.0, Space::Momentum, n));
        const auto cf = sample_coordinate_grid(config, 0.0, default_grid(config, 0.0, Space::Coordinate, n));
        // Per-axis norm; the 2D norm is its square.
        const double dm = std::abs(std::pow(1.0 + normalization_check(mf), 2) - 1.0);
        const double dc = std::abs(std::pow(1.0 + normalization_check(cf), 2) - 1.0);
        r.check(s, "grid quadrature of |Phi|^2 equals 1", dm, 1e-3);
        r.check(s, "grid quadrature of |Psi|^2 equals 1", dc, 1e-3);
    });
}

void analytics_checks(Report& r, const OpticalConfig& config, double z0, bool has_z0, std::mt19937_64& rng,
                      int coefficients) {
    const std::string s = "schmidt-analytics";
    const double zref = has_z0 ? z0 : 0.1;

    const double k0 = schmidt_number(config, 0.0);
    double k_drift = 0.0;
    for (double z : {0.0, zref / 2, zref, 2 * zref, 10 * zref}) k_drift = std::max(k_drift, rel(schmidt_number(config, z), k0));
    r.check(s, "K independent of z at {0, z0/2, z0, 2z0, 10z0} (relative)", k_drift, 1e-12);

    std::uniform_real_distribution<double> log_re(-1.0, 1.0), im(-10.0, 10.0);
    double triple = 0.0, trace = 0.0;
    for (int k = 0; k < coefficients; ++k) {
        const complex A(std::pow(10.0, log_re(rng)), im(rng)), B(std::pow(10.0, log_re(rng)), im(rng));
        const auto d = schmidt_params(A, B);
        const double eq = schmidt_number(A, B);
        const double alt = 1.0 + std::norm(A - B) / (4.0 * A.real() * B.real());
        triple = std::max({triple, rel(eq, d.K), rel(eq, alt), rel(d.K, alt)});
        double sum = 0.0;
        for (double l : schmidt_spectrum(d, 1e-14)) sum += l;
        trace = std::max(trace, std::abs(sum - 1.0));
    }
    r.check(s, "K closed form = (c/a)^2 = 1 + |A-B|^2/(4 ReA ReB) on random (A,B)", triple, 1e-12);
    r.check(s, "sum lambda_n = 1 on random (A,B)", trace, 1e-9);

    const auto m = momentum_coeffs(config, 0.0);
    const auto d = schmidt_params(m.A, m.B);
    const auto spectrum = schmidt_spectrum(d, 1e-14);
    double sum = 0.0, sum2 = 0.0;
    for (double l : spectrum) {
        sum += l;
        sum2 += l * l;
    }
    r.check(s, "trace: sum lambda_n = 1", std::abs(sum - 1.0), 1e-9);
    r.check(s, "purity: sum lambda_n^2 = a/c", std::abs(sum2 - d.a / d.c), 1e-9);
    r.check(s, "K = 1/(sum lambda_n^2)^2 (relative)", rel(1.0 / (sum2 * sum2), d.K), 1e-8);

    if (has_z0) {
        r.check(s, "F_x(z0) = 1", std::abs(fedorov_coordinate(config, z0) - 1.0), 1e-6);
        double min_excess = std::numeric_limits<double>::infinity();
        for (double z : scan_points(std::max(0.5, 4 * z0), 201)) {
            if (std::abs(ellipticity(config, z) - 1.0) < 1e-9) continue;
            min_excess = std::min(min_excess, fedorov_coordinate(config, z) - 1.0);
        }
        r.check_true(s, "F_x > 1 wherever e != 1", min_excess > 0.0, min_excess);
    } else {
        r.skip(s, "F_x(z0) = 1");
    }

    const auto probs = interferometer_probabilities(m.A, m.B);
    r.check(s, "P+ + P- = 1", std::abs(probs.plus + probs.minus - 1.0), 1e-15);
    r.check(s, "K recovered from (P+, P-) (relative)", rel(entanglement_from_probabilities(probs.plus, probs.minus), d.K),
            1e-12);

    r.guarded(s, "fringe quadrature", [&] {
        double worst = 0.0;
        for (double z : {0.0, zref / 2, zref, 2 * zref}) {
            const auto f = fringe_params(config, z);
            worst = std::max(worst, rel(fringe_quadrature(f), 1.0 / d.K));
        }
        r.check(s, "integral of P_diff = P+ - P- = 1/K (relative)", worst, 1e-4);
    });

    // theta* for order 2 as the envelope-per-fringe ratio r = R+/(2 I- x_i)^2 falls.
    bool in_band = true, monotone = true;
    double previous_gap = std::numeric_limits<double>::infinity();
    for (double ratio : {0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4, 1e-6}) {
        const FringeParams f{ratio * 4.0, 1.0, 1.0};  // 2 I- x_i = 2 with x_i = 1
        const double theta = locate_fringe_maximum(f, 1.0, 2).phase;
        in_band = in_band && theta > std::numbers::pi && theta < 2.0 * std::numbers::pi;
        const double gap = 2.0 * std::numbers::pi - theta;
        monotone = monotone && gap < previous_gap;
        previous_gap = gap;
    }
    r.check_true(s, "order-2 fringe phase lies in (pi, 2pi)", in_band);
    r.check_true(s, "2pi - theta* decreases as R+/(I- x_i)^2 decreases", monotone, previous_gap);
}

void oracle_checks(Report& r, const OpticalConfig& config, double z0, bool has_z0, const ValidationOptions& opt,
                   std::mt19937_64& rng) {
    const std::string s = "grid-oracle";
    const double zmid = has_z0 ? z0 : 0.1;
    const double k_closed = schmidt_number(config, 0.0);

    r.guarded(s, "DFT against closed form", [&] {
        // A 6 sigma momentum box cuts the amplitude at e^-9, which alone leaves ~1e-3
        // error in the transform; the oracle uses a 10 sigma box.
        const double factor = 10.0;
        const double h = factor * marginal_width(config, 0.0, Space::Momentum);
        const double cells = 16.0 * h / conditional_diameter(config, 0.0, Space::Momentum);
        const double cover = 16.0 * h * marginal_width(config, 0.0, Space::Coordinate) / std::numbers::pi;
        const int n = round_up(std::max({static_cast<double>(opt.grid_points), cells, cover}), 64);
        const auto mf = sample_momentum_grid(config, 0.0, default_grid(config, 0.0, Space::Momentum, n, factor));
        const auto cf = transform_to_coordinate(mf);
        const auto m = momentum_coeffs(config, 0.0);
        const auto c = coord_coeffs(m);
        // The continuous transform carries the constant phase of 1/sqrt(AB).
        const complex phase = std::sqrt(m.A * m.B) / std::abs(std::sqrt(m.A * m.B));
        const double peak = std::abs(coordinate_factor(c, 0.0, 0.0));
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double xs = cf.grid.coordinate(i), xi = cf.grid.coordinate(j);
                const complex ref = coordinate_factor(c, xs, xi);
                if (std::abs(ref) < peak * std::exp(-4.5)) continue;  // 3 sigma of |Psi|^2
                worst = std::max(worst, std::abs(cf.at(i, j) * phase - ref) / std::abs(ref));
            }
        r.check(s, "DFT of momentum grid matches coordinate closed form inside 3 sigma", worst, 1e-6);
        double in_norm = 0.0;
        for (const auto& v : mf.values) in_norm += std::norm(v);
        in_norm *= mf.weight();
        double out_norm = 0.0;
        for (const auto& v : cf.values) out_norm += std::norm(v);
        out_norm *= cf.weight();
        r.check(s, "Parseval: transformed norm equals input norm (relative)", rel(out_norm, in_norm), 1e-9);
    });

    r.guarded(s, "numeric Schmidt and moments", [&] {
        double k_worst = 0.0, f_worst = 0.0;
        for (double z : {0.0, zmid, 0.2}) {
            const int n = std::max(opt.grid_points, oracle_grid_points(config, z, Space::Coordinate));
            const auto field = sample_coordinate_grid(config, z, default_grid(config, z, Space::Coordinate, n));
            k_worst = std::max(k_worst, rel(numeric_schmidt(field).K, k_closed));
            f_worst = std::max(f_worst, rel(numeric_moments(field).fedorov, fedorov_coordinate(config, z)));
        }
        r.check(s, "SVD K at z = 0, z0, 0.2 m within 1% of closed form", k_worst, 1e-2);
        r.check(s, "grid F_x at z = 0, z0, 0.2 m within 0.5% of closed form", f_worst, 5e-3);
        const int n = std::max({opt.grid_points, oracle_grid_points(config, 0.0, Space::Momentum),
                                resolved_points(config, 0.0, Space::Momentum, 16.0)});
        const auto mf = sample_momentum_grid(config, 0.0, default_grid(config, 0.0, Space::Momentum, n));
        r.check(s, "grid F_p within 0.5% of closed form", rel(numeric_moments(mf).fedorov, fedorov_momentum(config, 0.0)),
                5e-3);
    });

    r.guarded(s, "random-config oracle agreement", [&] {
        double k_worst = 0.0, f_worst = 0.0;
        for (int k = 0; k < opt.random_configs; ++k) {
            const auto st = random_state(rng);
            const int n = oracle_grid_points(st.config, st.z, Space::Coordinate);
            const auto field =
                sample_coordinate_grid(st.config, st.z, default_grid(st.config, st.z, Space::Coordinate, n));
            k_worst = std::max(k_worst, rel(numeric_schmidt(field).K, schmidt_number(st.config, st.z)));
            f_worst = std::max(f_worst, rel(numeric_moments(field).fedorov, fedorov_coordinate(st.config, st.z)));
        }
        r.check(s, "random configs: SVD K within 1%", k_worst, 1e-2);
        r.check(s, "random configs: grid F_x within 0.5%", f_worst, 5e-3);
    });

    r.guarded(s, "interferometer composition", [&] {
        const double z = zmid / 2;
        const int n = std::max(256, oracle_grid_points(config, z, Space::Coordinate));
        const auto field = sample_coordinate_grid(config, z, default_grid(config, z, Space::Coordinate, n));
        r.check(s, "composed ports equal the parity forms pointwise", parity_form_deviation(field, field, 4096, 7), 1e-10);
        const auto run = simulate_interferometer(field, field, std::numbers::pi / 2, 0.0);
        const auto m = momentum_coeffs(config, z);
        const auto exact = interferometer_probabilities(m.A, m.B);
        r.check(s, "integrated port probabilities match (1 +- 1/K)/2",
                std::max(std::abs(run.probabilities.plus - exact.plus), std::abs(run.probabilities.minus - exact.minus)),
                1e-3);
        r.check(s, "K from simulated ports within 1%",
                rel(entanglement_from_probabilities(run.probabilities.plus, run.probabilities.minus), k_closed), 1e-2);

        const auto psi = analytic_biphoton(config, z);
        const auto ports = compose_interferometer(std::numbers::pi / 2, 0.0);
        const auto f = fringe_params(config, z);
        const double sigma = marginal_width(config, z, Space::Coordinate);
        double worst = 0.0;
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j) {
                const Vec2 xs{-3 * sigma + 0.15 * sigma * i, 0.0}, xi{-3 * sigma + 0.15 * sigma * j, 0.0};
                const double composed = port_intensity(ports.a, psi, xs, xi) - port_intensity(ports.b, psi, xs, xi);
                const double envelope = f.norm2 * std::exp(-f.r_plus * (xs[0] * xs[0] + xi[0] * xi[0]));
                worst = std::max(worst, std::abs(composed - p_diff(f, xs, xi)) / envelope);
            }
        r.check(s, "P_a - P_b equals the fringe form on (x_s,0;x_i,0) inside 3 sigma", worst, 1e-6);
    });

    r.guarded(s, "grid refinement", [&] {
        // Ladder from the grid holding the Schmidt modes above 1e-2 up to the
        // requested size, on the round (z0) coordinate state.
        const auto m = momentum_coeffs(config, zmid);
        const auto modes = schmidt_spectrum(schmidt_params(m.A, m.B), 1e-2).size();
        int n = std::max(32, 64 * static_cast<int>(std::ceil(modes / 64.0)));
        const int top = std::max(opt.grid_points, 2 * n);
        double previous = kNaN;
        double min_ratio = std::numeric_limits<double>::infinity();
        for (; n <= top; n *= 2) {
            const auto field = sample_coordinate_grid(config, zmid, default_grid(config, zmid, Space::Coordinate, n));
            const double err = rel(numeric_schmidt(field).K, k_closed);
            if (!std::isnan(previous) && previous > 1e-6) min_ratio = std::min(min_ratio, previous / std::max(err, 1e-300));
            previous = err;
        }
        r.check_at_least(s, "doubling grid points shrinks |K_numeric - K| at least 2x until 1e-6", min_ratio, 2.0);
    });
}

}  // namespace

SampledState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> length(2e-3, 10e-3), waist(100e-6, 600e-6), wavelength(400e-9, 1064e-9),
        index(1.4, 2.0), curvature(-2.0, 2.0), distance(0.0, 0.3);
    for (;;) {
        SampledState st;
        st.config.crystal_length = length(rng);
        st.config.pump_waist = waist(rng);
        st.config.pump_wavelength = wavelength(rng);
        st.config.pump_refractive_index = index(rng);
        st.config.pump_inverse_curvature = curvature(rng);
        st.config.alpha = kDefaultAlpha;
        st.z = distance(rng);
        const double k = schmidt_number(st.config, st.z);
        if (k >= 2.0 && k <= 1000.0) return st;
    }
}

std::vector<CheckResult> run_validation(const OpticalConfig& config, const ValidationOptions& options) {
    Report r;
    try {
        config.validate();
        schmidt_params(momentum_coeffs(config, 0.0).A, momentum_coeffs(config, 0.0).B);
    } catch (const std::exception& e) {
        r.check_true("core-model", std::string("config invariants [") + e.what() + "]", false);
        return r.take();
    }
    r.check_true("core-model", "config invariants", true);

    std::mt19937_64 rng(options.seed);
    double z0 = 0.0;
    bool has_z0 = true;
    try {
        z0 = find_migration_point(config, 10.0);
    } catch (const Error&) {
        has_z0 = false;
    }

    core_model_checks(r, config, rng, options.grid_points);
    analytics_checks(r, config, z0, has_z0, rng, options.random_coefficients);
    oracle_checks(r, config, z0, has_z0, options, rng);
    return r.take();
}

}  // namespace spdc

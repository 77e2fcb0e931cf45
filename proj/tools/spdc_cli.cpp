// Command-line front end over the C API: scans, coincidence maps, interferometer
// runs, Schmidt spectra and the validation suite.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdc/spdc.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitBadInput = 2;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    spdc_optical_params optics{};
    int grid_points = 512;
    double halfwidth_factor = 6.0;
    double z_min = 0.0;
    double z_max = 0.2;
    int z_steps = 201;
};

void check(spdc_status status, const char* what) {
    if (status != SPDC_OK)
        throw BadInput(std::string(what) + ": " + spdc_status_string(status) + " (" + spdc_last_error() + ")");
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

RunConfig load_config(const std::string& path) {
    RunConfig rc;
    spdc_reference_params(&rc.optics);
    if (path.empty()) return rc;

    std::ifstream in(path);
    if (!in) throw BadInput("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw BadInput("config " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw BadInput("config must be a JSON object");

    auto number = [&](const std::string& key, const json& v) {
        if (!v.is_number()) throw BadInput("config field " + key + " must be a number");
        return v.get<double>();
    };
    auto integer = [&](const std::string& key, const json& v) {
        if (!v.is_number_integer()) throw BadInput("config field " + key + " must be an integer");
        return v.get<int>();
    };
    for (const auto& [key, v] : doc.items()) {
        if (key == "crystal_length_m") rc.optics.crystal_length = number(key, v);
        else if (key == "pump_waist_m") rc.optics.pump_waist = number(key, v);
        else if (key == "pump_wavelength_m") rc.optics.pump_wavelength = number(key, v);
        else if (key == "pump_refractive_index") rc.optics.pump_refractive_index = number(key, v);
        else if (key == "pump_inverse_curvature_per_m") rc.optics.pump_inverse_curvature = number(key, v);
        else if (key == "alpha") rc.optics.alpha = number(key, v);
        else if (key == "grid_points") rc.grid_points = integer(key, v);
        else if (key == "grid_halfwidth_factor") rc.halfwidth_factor = number(key, v);
        else if (key == "z_min_m") rc.z_min = number(key, v);
        else if (key == "z_max_m") rc.z_max = number(key, v);
        else if (key == "z_steps") rc.z_steps = integer(key, v);
        else throw BadInput("unknown config field " + key);
    }
    return rc;
}

void check_run_config(const RunConfig& rc) {
    if (rc.grid_points < 16 || rc.grid_points % 2 != 0) throw BadInput("grid_points must be even and >= 16");
    if (!(rc.halfwidth_factor > 0.0)) throw BadInput("grid_halfwidth_factor must be > 0");
    if (!(rc.z_min >= 0.0)) throw BadInput("z_min_m must be >= 0");
    if (!(rc.z_max >= rc.z_min)) throw BadInput("z_max_m must be >= z_min_m");
    if (rc.z_steps < 2) throw BadInput("z_steps must be >= 2");
}

struct ConfigDeleter {
    void operator()(spdc_config* c) const { spdc_config_destroy(c); }
};
struct FieldDeleter {
    void operator()(spdc_field* f) const { spdc_field_destroy(f); }
};
struct RunDeleter {
    void operator()(spdc_interferometer* r) const { spdc_interferometer_destroy(r); }
};
using ConfigPtr = std::unique_ptr<spdc_config, ConfigDeleter>;
using FieldPtr = std::unique_ptr<spdc_field, FieldDeleter>;
using RunPtr = std::unique_ptr<spdc_interferometer, RunDeleter>;

ConfigPtr make_config(const RunConfig& rc) {
    spdc_config* c = nullptr;
    check(spdc_config_create(&rc.optics, &c), "invalid optical configuration");
    return ConfigPtr(c);
}

std::optional<double> migration_point(const spdc_config* c, double z_max) {
    double z0 = 0.0;
    if (spdc_find_migration_point(c, z_max, &z0) == SPDC_OK) return z0;
    return std::nullopt;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Echo of the resolved configuration; the timestamp is the only varying line.
void header(std::ostream& os, const std::string& command, const RunConfig& rc,
            const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    os << "# spdc " << command << "\n";
    os << "# generated_utc: " << utc_timestamp() << "\n";
    os << "# crystal_length_m: " << num(rc.optics.crystal_length) << "\n";
    os << "# pump_waist_m: " << num(rc.optics.pump_waist) << "\n";
    os << "# pump_wavelength_m: " << num(rc.optics.pump_wavelength) << "\n";
    os << "# pump_refractive_index: " << num(rc.optics.pump_refractive_index) << "\n";
    os << "# pump_inverse_curvature_per_m: " << num(rc.optics.pump_inverse_curvature) << "\n";
    os << "# alpha: " << num(rc.optics.alpha) << "\n";
    os << "# grid_points: " << rc.grid_points << "\n";
    os << "# grid_halfwidth_factor: " << num(rc.halfwidth_factor) << "\n";
    os << "# z_min_m: " << num(rc.z_min) << "\n";
    os << "# z_max_m: " << num(rc.z_max) << "\n";
    os << "# z_steps: " << rc.z_steps << "\n";
    for (const auto& [k, v] : extra) os << "# " << k << ": " << v << "\n";
}

// stdout when path is empty; otherwise write a sibling temp file and rename it.
void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw BadInput("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw BadInput("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw BadInput("cannot rename output into place: " + ec.message());
    }
}

std::string cmd_scan(const RunConfig& rc) {
    auto c = make_config(rc);
    std::ostringstream os;
    header(os, "scan", rc);
    os << "z_m,ellipticity,fedorov_x,fedorov_p,schmidt_K,p_plus,p_minus\n";
    for (int i = 0; i < rc.z_steps; ++i) {
        const double z = i + 1 == rc.z_steps ? rc.z_max : rc.z_min + (rc.z_max - rc.z_min) * i / (rc.z_steps - 1);
        spdc_scan_row row;
        check(spdc_scan_row_at(c.get(), z, &row), "scan row");
        os << num(row.z) << ',' << num(row.ellipticity) << ',' << num(row.fedorov_x) << ',' << num(row.fedorov_p)
           << ',' << num(row.schmidt_k) << ',' << num(row.p_plus) << ',' << num(row.p_minus) << '\n';
    }
    const auto z0 = migration_point(c.get(), rc.z_max);
    if (z0 && *z0 >= rc.z_min) os << "# z0_m: " << num(*z0) << "\n";
    else os << "# z0_m: none in range\n";
    return os.str();
}

double resolve_z(const spdc_config* c, double z, bool at_migration) {
    if (!at_migration) return z;
    const auto z0 = migration_point(c, 10.0);
    if (!z0) throw BadInput("no migration point within 10 m for this configuration");
    return *z0;
}

std::string cmd_map(const RunConfig& rc, double z, bool at_migration, const std::string& space_name) {
    auto c = make_config(rc);
    z = resolve_z(c.get(), z, at_migration);
    const auto space = space_name == "momentum" ? SPDC_SPACE_MOMENTUM : SPDC_SPACE_COORDINATE;

    spdc_field* raw = nullptr;
    check(spdc_field_sample(c.get(), z, space, rc.grid_points, rc.halfwidth_factor, &raw), "sampling the map");
    FieldPtr field(raw);
    const auto n = static_cast<size_t>(spdc_field_points(field.get()));
    std::vector<double> axis(n), intensity(n * n);
    check(spdc_field_axis(field.get(), axis.data(), axis.size()), "grid axis");
    check(spdc_field_intensity(field.get(), intensity.data(), intensity.size()), "grid intensity");
    double ratio = 0.0, angle = 0.0, deviation = 0.0;
    check(spdc_field_principal_axes(field.get(), &ratio, &angle), "principal axes");
    check(spdc_field_normalization_deviation(field.get(), &deviation), "normalization");

    std::ostringstream os;
    header(os, "map", rc, {{"space", space_name}, {"z_m", num(z)}, {"density", "per-axis |amplitude|^2 at y_s = y_i = 0"}});
    os << (space == SPDC_SPACE_MOMENTUM ? "p_s_per_m,p_i_per_m,intensity\n" : "x_s_m,x_i_m,intensity\n");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            os << num(axis[i]) << ',' << num(axis[j]) << ',' << num(intensity[i * n + j]) << '\n';
    os << "# principal_axis_ratio: " << num(ratio) << "\n";
    os << "# principal_axis_angle_deg: " << num(angle * 180.0 / std::numbers::pi) << "\n";
    os << "# normalization_deviation: " << num(deviation) << "\n";
    return os.str();
}

struct InterfereOptions {
    double z = 0.0;
    bool at_migration = false;
    std::optional<double> x_i;
    int slice_points = 401;
    std::optional<double> slice_halfwidth;
};

std::string cmd_interfere(const RunConfig& rc, const InterfereOptions& opt) {
    auto c = make_config(rc);
    const double z = resolve_z(c.get(), opt.z, opt.at_migration);
    if (opt.slice_points < 2) throw BadInput("--slice-points must be >= 2");

    spdc_scan_row row;
    check(spdc_scan_row_at(c.get(), z, &row), "analytic probabilities");
    double k_analytic = 0.0;
    check(spdc_schmidt_number(c.get(), z, &k_analytic), "Schmidt number");

    int points = 0;
    check(spdc_oracle_grid_points(c.get(), z, SPDC_SPACE_COORDINATE, &points), "grid sizing");
    points = std::max(points, rc.grid_points);
    spdc_field* raw = nullptr;
    check(spdc_field_sample(c.get(), z, SPDC_SPACE_COORDINATE, points, rc.halfwidth_factor, &raw), "sampling");
    FieldPtr field(raw);
    spdc_interferometer* run_raw = nullptr;
    check(spdc_interferometer_run(field.get(), field.get(), std::numbers::pi / 2, 0.0, &run_raw), "interferometer");
    RunPtr run(run_raw);
    double p_plus = 0.0, p_minus = 0.0, k_sim = NAN;
    check(spdc_interferometer_probabilities(run.get(), &p_plus, &p_minus), "port probabilities");
    if (spdc_entanglement_from_probabilities(p_plus, p_minus, &k_sim) != SPDC_OK) k_sim = NAN;

    spdc_fringe_params fringe;
    check(spdc_fringe_params_at(c.get(), z, &fringe), "fringe parameters");
    const double x_i = opt.x_i ? *opt.x_i : 1.0 / std::sqrt(fringe.r_plus);
    if (x_i == 0.0) throw BadInput("--x-i must be nonzero");
    const double half = opt.slice_halfwidth ? *opt.slice_halfwidth : 3.0 / std::sqrt(fringe.r_plus);
    if (!(half > 0.0)) throw BadInput("--slice-halfwidth must be > 0");

    double x_star = NAN, theta = NAN;
    const auto found = spdc_locate_fringe_maximum(&fringe, x_i, 2, &x_star, &theta);

    std::ostringstream os;
    header(os, "interfere", rc,
           {{"z_m", num(z)},
            {"theta1_rad", num(std::numbers::pi / 2)},
            {"theta2_rad", num(0.0)},
            {"x_i_m", num(x_i)},
            {"grid_points_used", std::to_string(points)},
            {"p_plus_analytic", num(row.p_plus)},
            {"p_minus_analytic", num(row.p_minus)},
            {"p_plus_simulated", num(p_plus)},
            {"p_minus_simulated", num(p_minus)},
            {"K_analytic", num(k_analytic)},
            {"K_simulated", num(k_sim)},
            {"R_plus_per_m2", num(fringe.r_plus)},
            {"I_minus_per_m2", num(fringe.i_minus)},
            {"second_maximum_x_s_m", found == SPDC_OK ? num(x_star) : "none"},
            {"second_maximum_theta_over_pi", found == SPDC_OK ? num(theta / std::numbers::pi) : "none"},
            {"second_maximum_theta_over_2pi", found == SPDC_OK ? num(theta / (2 * std::numbers::pi)) : "none"}});
    os << "x_s_m,p_diff,p_diff_phase_free\n";
    spdc_fringe_params flat = fringe;
    flat.i_minus = 0.0;
    const double xi[2] = {x_i, 0.0};
    for (int i = 0; i < opt.slice_points; ++i) {
        const double xs[2] = {-half + 2.0 * half * i / (opt.slice_points - 1), 0.0};
        double d = 0.0, d0 = 0.0;
        check(spdc_p_diff(&fringe, xs, xi, &d), "P_diff");
        check(spdc_p_diff(&flat, xs, xi, &d0), "P_diff");
        os << num(xs[0]) << ',' << num(d) << ',' << num(d0) << '\n';
    }
    return os.str();
}

std::string cmd_schmidt(const RunConfig& rc, double z, bool at_migration, int modes, bool numeric) {
    auto c = make_config(rc);
    z = resolve_z(c.get(), z, at_migration);
    if (modes < 1) throw BadInput("--modes must be >= 1");

    spdc_schmidt_data d;
    check(spdc_schmidt_params(c.get(), z, &d), "Schmidt parameters");
    size_t count = 0;
    check(spdc_schmidt_spectrum(c.get(), 1e-14, nullptr, 0, &count), "spectrum");
    std::vector<double> lambda(std::min(count, static_cast<size_t>(modes)));
    check(spdc_schmidt_spectrum(c.get(), 1e-14, lambda.data(), lambda.size(), &count), "spectrum");

    std::vector<std::pair<std::string, std::string>> extra{
        {"z_m", num(z)}, {"a", num(d.a)}, {"b", num(d.b)}, {"c", num(d.c)},
        {"w", num(d.w)}, {"K_1d", num(d.k1d)}, {"K", num(d.k)}};
    if (numeric) {
        int points = 0;
        check(spdc_oracle_grid_points(c.get(), z, SPDC_SPACE_COORDINATE, &points), "grid sizing");
        points = std::max(points, rc.grid_points);
        spdc_field* raw = nullptr;
        check(spdc_field_sample(c.get(), z, SPDC_SPACE_COORDINATE, points, rc.halfwidth_factor, &raw), "sampling");
        FieldPtr field(raw);
        double k1d = 0.0, k = 0.0;
        check(spdc_field_numeric_schmidt(field.get(), &k1d, &k), "numeric Schmidt");
        extra.emplace_back("grid_points_used", std::to_string(points));
        extra.emplace_back("K_numeric", num(k));
    }
    std::ostringstream os;
    header(os, "schmidt", rc, extra);
    os << "n,lambda_1d\n";
    for (size_t i = 0; i < lambda.size(); ++i) os << i << ',' << num(lambda[i]) << '\n';
    return os.str();
}

struct ValidationSink {
    std::ostringstream text;
};

void on_check(const spdc_check* chk, void* user) {
    auto* sink = static_cast<ValidationSink*>(user);
    sink->text << (chk->passed ? "PASS " : "FAIL ") << chk->section << ": " << chk->name
               << "  measured=" << num(chk->measured) << " tolerance=" << num(chk->tolerance) << "\n";
}

int cmd_validate(const RunConfig& rc, uint64_t seed, const std::string& out) {
    ValidationSink sink;
    int failures = 0;
    check(spdc_validate(&rc.optics, rc.grid_points, seed, on_check, &sink, &failures), "validation");
    std::ostringstream os;
    header(os, "validate", rc, {{"seed", std::to_string(seed)}});
    os << sink.text.str();
    os << (failures == 0 ? "all checks passed\n" : std::to_string(failures) + " check(s) failed\n");
    if (out.empty()) {
        std::cout << os.str() << std::flush;
    } else {
        emit(out, os.str());
        std::cout << (failures == 0 ? "all checks passed\n" : std::to_string(failures) + " check(s) failed\n");
    }
    return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transverse entanglement of SPDC biphotons under free propagation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path;
    std::optional<int> grid_points;
    uint64_t seed = 20070101;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--grid-points", grid_points, "grid points per axis (even, >= 16)");
    app.add_option("--seed", seed, "seed for randomized checks in validate");

    auto* scan = app.add_subcommand("scan", "ellipticity, Fedorov ratios, K and port probabilities versus z");
    std::optional<double> z_min, z_max;
    std::optional<int> z_steps;
    scan->add_option("--z-min", z_min, "first z [m]");
    scan->add_option("--z-max", z_max, "last z [m]");
    scan->add_option("--z-steps", z_steps, "number of z rows (>= 2)");

    double z = 0.0;
    bool at_migration = false;
    auto* map = app.add_subcommand("map", "coincidence density on the (signal, idler) plane");
    std::string space = "coordinate";
    map->add_option("--z", z, "propagation distance [m]");
    map->add_flag("--at-migration", at_migration, "use the migration point z0");
    map->add_option("--space", space, "coordinate or momentum")->check(CLI::IsMember({"coordinate", "momentum"}));

    auto* interfere = app.add_subcommand("interfere", "Dove-prism interferometer: P+-, K and the fringe slice");
    InterfereOptions iopt;
    interfere->add_option("--z", iopt.z, "propagation distance [m]");
    interfere->add_flag("--at-migration", iopt.at_migration, "use the migration point z0");
    interfere->add_option("--x-i", iopt.x_i, "idler position of the slice [m] (default 1/sqrt(R+))");
    interfere->add_option("--slice-points", iopt.slice_points, "samples along x_s");
    interfere->add_option("--slice-halfwidth", iopt.slice_halfwidth, "slice half-width [m] (default 3/sqrt(R+))");

    auto* schmidt = app.add_subcommand("schmidt", "Schmidt parameters and eigenvalue spectrum");
    int modes = 20;
    bool numeric = false;
    schmidt->add_option("--z", z, "propagation distance [m]");
    schmidt->add_flag("--at-migration", at_migration, "use the migration point z0");
    schmidt->add_option("--modes", modes, "number of 1D eigenvalues to list");
    schmidt->add_flag("--numeric", numeric, "also compute K by SVD of the sampled state");

    auto* validate = app.add_subcommand("validate", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        RunConfig rc = load_config(config_path);
        if (grid_points) rc.grid_points = *grid_points;
        if (z_min) rc.z_min = *z_min;
        if (z_max) rc.z_max = *z_max;
        if (z_steps) rc.z_steps = *z_steps;
        check_run_config(rc);

        if (validate->parsed()) return cmd_validate(rc, seed, out_path);

        std::string content;
        if (scan->parsed()) content = cmd_scan(rc);
        else if (map->parsed()) content = cmd_map(rc, z, at_migration, space);
        else if (interfere->parsed()) content = cmd_interfere(rc, iopt);
        else if (schmidt->parsed()) content = cmd_schmidt(rc, z, at_migration, modes, numeric);
        emit(out_path, content);
        return kExitOk;
    } catch (const BadInput& e) {
        std::cerr << "spdc: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "spdc: " << e.what() << "\n";
        return kExitBadInput;
    }
}

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spdc/model.hpp"

namespace spdc {

struct CheckResult {
    std::string section;
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct ValidationOptions {
    int grid_points = 512;
    std::uint64_t seed = 20070101;
    int random_configs = 20;
    int random_coefficients = 1000;
};

/// Random configuration and distance in a range the grid oracles resolve
/// (2 <= K <= 1000), for property checks.
struct SampledState {
    OpticalConfig config;
    double z = 0.0;
};

SampledState random_state(std::mt19937_64& rng);

/// Runs every model, analytics and oracle invariant against `config`.
/// An invalid config yields a single failed "config invariants" check.
std::vector<CheckResult> run_validation(const OpticalConfig& config, const ValidationOptions& options = {});

}  // namespace spdc

#include <random>

#include "doctest.h"
#include "spdc/schmidt.hpp"
#include "spdc/validation.hpp"

using namespace spdc;

TEST_CASE("random states stay in the sampled ranges") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto s = random_state(rng);
        CHECK_NOTHROW(s.config.validate());
        CHECK(s.z >= 0.0);
        CHECK(s.z <= 0.3);
        const double k = schmidt_number(s.config, s.z);
        CHECK(k >= 2.0);
        CHECK(k <= 1000.0);
    }
}

TEST_CASE("invalid config yields a single failed invariant check") {
    auto c = OpticalConfig::reference();
    c.alpha = -1.0;
    const auto r = run_validation(c);
    REQUIRE(r.size() == 1);
    CHECK_FALSE(r[0].passed);
    CHECK(r[0].section == "core-model");
}

TEST_CASE("reference config passes every check") {
    ValidationOptions opt;
    opt.random_configs = 4;
    opt.random_coefficients = 200;
    const auto r = run_validation(OpticalConfig::reference(), opt);
    CHECK(r.size() > 20);
    for (const auto& c : r) {
        INFO(c.section, ": ", c.name, " measured ", c.measured);
        CHECK(c.passed);
    }
}

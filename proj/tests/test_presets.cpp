#include "doctest.h"
#include "riemcurv/errors.hpp"
#include "riemcurv/presets.hpp"

using namespace riemcurv;

TEST_CASE("euclidean(3) ships six Killing fields") {
    const Preset p = load_preset("euclidean", {{"m", 3}});
    CHECK(p.dim_isometry() == 6);
    CHECK(p.killing_labels.front() == "T1");
    CHECK(p.killing_labels.back() == "R23");
}

TEST_CASE("preset parameter validation") {
    CHECK_THROWS_AS(load_preset("nope", {}), ConfigError);
    CHECK_THROWS_AS(load_preset("sphere", {{"k", -1.0}}), ConfigError);
    CHECK_THROWS_AS(load_preset("hyperbolic", {{"k", 1.0}}), ConfigError);
    CHECK_THROWS_AS(load_preset("solvable_group", {{"nu", -2.0}}), ConfigError);
    CHECK_THROWS_AS(load_preset("solvable_group", {{"mu", 0.5}}), ConfigError);
    CHECK_THROWS_AS(load_preset("g_kappa_tau", {{"kappa", 0.0}, {"tau", 0.0}}),
                    ConfigError);
    CHECK_THROWS_AS(load_preset("torus_example1", {{"r", 2.0}}), ConfigError);
}

TEST_CASE("g_kappa_tau ships the four-field basis") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    REQUIRE(p.dim_isometry() == 4);
    CHECK(p.killing_labels == std::vector<std::string>{"X1", "X2", "X3", "Z"});
    CHECK(p.expected_rank_d1 == 4);
}

TEST_CASE("schemas list every preset") {
    const auto schemas = preset_schemas();
    CHECK(schemas.size() == 8);
    for (const auto& s : schemas) CHECK_NOTHROW(load_preset(s.name, {}));
}

TEST_CASE("selfcheck passes on every preset") {
    for (const auto& s : preset_schemas()) {
        const SelfCheckReport rep = preset_selfcheck(s.name, {});
        for (const auto& item : rep.items) {
            INFO(s.name << ": " << item.name << " value " << item.value
                        << " threshold " << item.threshold);
            CHECK(item.pass);
        }
    }
}

TEST_CASE("bump preset shows the non-analytic signature") {
    const SelfCheckReport rep = preset_selfcheck("bump_example2", {{"m", 2}});
    bool found_flat = false, found_curved = false;
    for (const auto& item : rep.items) {
        if (item.name == "flat_to_order_2_at_origin") found_flat = item.pass;
        if (item.name == "curvature_nonzero_at_xt") found_curved = item.pass;
    }
    CHECK(found_flat);
    CHECK(found_curved);
}

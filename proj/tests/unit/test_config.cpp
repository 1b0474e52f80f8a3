#include "pvvsg/config.hpp"
#include "pvvsg/errors.hpp"
#include "pvvsg/sim.hpp"

#include <doctest.h>

#include <string>

using namespace pvvsg;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line " + std::to_string(e.line())) != std::string::npos);
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("shipped scenario file equals the built-in preset") {
    CHECK(load_config_file(PVVSG_SCENARIO_DIR "/case1.ini") == preset_scenario("case1"));
    CHECK(parse_config("preset = case1\n") == preset_scenario("case1"));
}

TEST_CASE("every preset survives a format and parse cycle") {
    for (const auto& name : preset_names()) {
        const Scenario sc = preset_scenario(name);
        CHECK(parse_config(format_config(sc)) == sc);
    }
}

TEST_CASE("empty events give an equilibrium run") {
    const Scenario sc = parse_config("preset = case1\n[events]\n");
    CHECK(sc.loads.empty());
    CHECK(sc.irradiance.empty());
    Scenario shorter = sc;
    shorter.duration = 5.0;
    for (double f : run_scenario(shorter).freq_hz) {
        CHECK(f == 50.0);
    }
}

TEST_CASE("keys and events parse") {
    const Scenario sc = parse_config(R"(# comment
[sim]
name = demo
duration = 12
mode = proposed_vsg

[diesel]
p_ref = 40000

[pv]
units = 2
np = 12

[pv.2]
reserve = 0.25

[events]
irradiance0 = 900
load_step = 5, 2500
irradiance_ramp = 6, -4, 8
irradiance = 10, 600
)");
    CHECK(sc.name == "demo");
    CHECK(sc.duration == 12.0);
    CHECK(sc.mode == ControllerMode::proposed_vsg);
    CHECK(sc.diesel.p_ref == 40000.0);
    REQUIRE(sc.pv.size() == 2);
    CHECK(sc.pv[0].array.np == 12);
    CHECK(sc.pv[1].array.np == 12);
    CHECK(sc.pv[0].reserve == 0.2);
    CHECK(sc.pv[1].reserve == 0.25);
    CHECK(sc.irradiance0 == 900.0);
    REQUIRE(sc.loads.size() == 1);
    CHECK(sc.loads[0] == LoadStep{5.0, 2500.0});
    REQUIRE(sc.irradiance.size() == 2);
    CHECK(sc.irradiance[0].kind == IrradianceKind::ramp);
    CHECK(sc.irradiance[0].end == 8.0);
}

TEST_CASE("config errors carry the line") {
    CHECK(error_line("[sim]\nduration = 10\n[events]\nload_step = ten\n") == 4);
    CHECK(error_line("[sim]\nfoo = 1\n[events]\n") == 2);
    CHECK(error_line("preset = case1\n[diesel]\nr = x\n") == 3);
    CHECK(error_line("preset = case1\n[mystery]\n") == 2);
    CHECK(error_line("preset = nope\n") == 1);
    CHECK(error_line("[events]\nload_step = 1, 2\n") > 0);
    CHECK(error_line("preset = case1\n[sim]\nduration = -3\nname = x\n") == 3);
    CHECK(error_line("[sim]\ndt_grid = 0.002\ndt_control = 0.002\noutput_dt = 0.003\n[events]\n") == 4);
}

TEST_CASE("command line overrides") {
    Scenario sc = preset_scenario("case1");
    apply_overrides(sc, {"pv.np=12", "sim.mode=prc_vsg", "duration=20", "events.load_step=40,5000",
                         "pv.2.reserve=0.3"});
    CHECK(sc.pv[0].array.np == 12);
    CHECK(sc.mode == ControllerMode::prc_vsg);
    CHECK(sc.duration == 20.0);
    CHECK(sc.loads.size() == 2);
    CHECK(sc.pv[1].reserve == 0.3);
    CHECK(sc.pv[0].reserve == 0.2);
    CHECK_THROWS_AS(apply_overrides(sc, {"diesel.bogus=1"}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(sc, {"no_equals"}), ConfigError);
}

TEST_CASE("shortest decimals round trip") {
    for (double v : {0.1, 1.0 / 3.0, 49.86, 1e-300, 12345.678901234567}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(load_config_file("/nonexistent/file.ini"), IoError);
}

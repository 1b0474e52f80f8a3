#include "pvvsg/errors.hpp"
#include "pvvsg/sim.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pvvsg;

namespace {

Scenario short_case1(ControllerMode mode, double duration = 40.0) {
    Scenario sc = preset_scenario("case1");
    sc.mode = mode;
    sc.duration = duration;
    return sc;
}

} // namespace

TEST_CASE("metrics of a sine") {
    TimeSeries ts;
    const double a = 0.2;
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        const double t = k * 1e-3;
        ts.time.push_back(t);
        ts.freq_hz.push_back(50.0 + a * std::sin(2.0 * std::numbers::pi * t));
        ts.diesel_w.push_back(1.0);
        ts.battery_w.push_back(2.0);
        ts.load_w.push_back(3.0);
    }
    const Metrics m = compute_metrics(ts);
    CHECK(m.rmse == doctest::Approx(a / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(m.rms == doctest::Approx(std::sqrt(2500.0 + a * a / 2.0)).epsilon(1e-9));
    CHECK(m.max_dev == doctest::Approx(a).epsilon(1e-6));
    CHECK(m.nadir == doctest::Approx(50.0 - a).epsilon(1e-9));
    CHECK(m.diesel.steady == 1.0);
    MetricsWindow w;
    w.t_begin = 100.0;
    CHECK_THROWS_AS(compute_metrics(ts, w), DomainError);
}

TEST_CASE("irradiance profiles") {
    const IrradianceProfile p(1000.0, {{IrradianceKind::ramp, 30.0, -5.0, 50.0},
                                       {IrradianceKind::step, 60.0, 700.0, std::nullopt}});
    CHECK(p.at(10.0) == 1000.0);
    CHECK(p.at(40.0) == doctest::Approx(950.0));
    CHECK(p.at(55.0) == doctest::Approx(900.0));
    CHECK(p.at(61.0) == 700.0);
    CHECK(p.final_value() == 700.0);
    CHECK(p.constant_after(60.0));
    CHECK_FALSE(p.constant_after(35.0));
}

TEST_CASE("load steps accumulate") {
    Scenario sc = preset_scenario("case1");
    sc.loads = {{10.0, 1000.0}, {20.0, -500.0}};
    CHECK(load_at(sc, 50e3, 5.0) == 50e3);
    CHECK(load_at(sc, 50e3, 15.0) == 51e3);
    CHECK(load_at(sc, 50e3, 25.0) == 50.5e3);
    CHECK(last_event_time(sc) == 20.0);
}

TEST_CASE("trace layout") {
    const Scenario sc = short_case1(ControllerMode::none, 2.0);
    const TimeSeries ts = run_scenario(sc);
    CHECK(ts.size() == 201);
    CHECK(ts.units() == 3);
    CHECK(ts.time.back() == doctest::Approx(2.0));
    CHECK(ts.reserve[0][0] == doctest::Approx(0.2).epsilon(0.02));
}

TEST_CASE("virtual rotor pushes power out during a dip") {
    const SimulationResult r = simulate(short_case1(ControllerMode::proposed_vsg));
    for (const auto& u : r.units) {
        CHECK(u.final_shift > 0.0);
        CHECK(u.derivative_evaluations == 0);
    }
    const SimulationResult w = simulate(short_case1(ControllerMode::prc_vsg));
    CHECK(w.units[0].derivative_evaluations > 0);
}

TEST_CASE("dynamic steady state matches the algebraic balance") {
    for (auto mode : {ControllerMode::none, ControllerMode::proposed_vsg}) {
        const Scenario sc = short_case1(mode);
        const Metrics m = compute_metrics(run_scenario(sc));
        CHECK(std::abs(steady_state_solve(sc).freq_hz - m.steady) <= 0.02);
    }
    Scenario ramp = preset_scenario("case3");
    ramp.irradiance[0].end.reset();
    CHECK_THROWS_AS(steady_state_solve(ramp), DomainError);
}

TEST_CASE("halving the grid step barely moves the nadir") {
    Scenario sc = short_case1(ControllerMode::proposed_vsg);
    const double coarse = compute_metrics(run_scenario(sc)).nadir;
    sc.dt_grid *= 0.5;
    const double fine = compute_metrics(run_scenario(sc)).nadir;
    CHECK(std::abs(coarse - fine) <= 0.005);
}

TEST_CASE("reruns are bit identical") {
    const Scenario sc = short_case1(ControllerMode::prc_vsg, 35.0);
    CHECK(run_scenario(sc) == run_scenario(sc));
}

TEST_CASE("collapse aborts with the time") {
    Scenario sc = short_case1(ControllerMode::none, 10.0);
    sc.loads = {{1.0, 200e3}};
    try {
        run_scenario(sc);
        FAIL("expected an abort");
    } catch (const InstabilityError& e) {
        CHECK(e.time() > 1.0);
        CHECK(e.time() < 10.0);
    }
}

TEST_CASE("scenario validation") {
    Scenario sc = preset_scenario("case1");
    sc.duration = -1.0;
    CHECK_THROWS_AS(run_scenario(sc), ConfigError);
    CHECK_THROWS_AS(preset_scenario("case9"), ConfigError);
    CHECK(preset_names().size() == 8);
}

TEST_CASE("long ramp saturates the array without losing the rotor") {
    Scenario sc = preset_scenario("case3");
    sc.mode = ControllerMode::proposed_vsg;
    sc.duration = 120.0;
    const SimulationResult r = simulate(sc);
    const double omega_g = 2.0 * std::numbers::pi * r.series.freq_hz.back();
    for (const auto& u : r.units) {
        CHECK(std::abs(u.final_omega_s - omega_g) < 0.05);
        CHECK(std::abs(u.final_shift) < 200.0);
    }
}

TEST_CASE("flat trace metrics") {
    TimeSeries ts;
    for (int k = 0; k < 100; ++k) {
        ts.time.push_back(k * 0.01);
        ts.freq_hz.push_back(50.0);
        ts.diesel_w.push_back(0.0);
        ts.battery_w.push_back(0.0);
        ts.load_w.push_back(0.0);
    }
    const Metrics m = compute_metrics(ts);
    CHECK(m.nadir == 50.0);
    CHECK(m.peak == 50.0);
    CHECK(m.rms == doctest::Approx(50.0));
    CHECK(m.rmse == 0.0);
}

TEST_CASE("no events means nominal frequency at the reserve") {
    Scenario sc = preset_scenario("case1");
    sc.loads.clear();
    sc.duration = 10.0;
    const TimeSeries ts = run_scenario(sc);
    for (double f : ts.freq_hz) {
        CHECK(std::abs(f - 50.0) <= 1e-6);
    }
    CHECK(ts.reserve[0].back() == doctest::Approx(0.2).epsilon(0.02));
    CHECK(steady_state_solve(sc).freq_hz == 50.0);
    CHECK(ts.pv_w[0].back() == doctest::Approx(ts.pv_w[0].front()));
}

TEST_CASE("falling irradiance lowers PV power before the load step") {
    Scenario sc = preset_scenario("case3");
    sc.duration = 45.0;
    const TimeSeries ts = run_scenario(sc);
    double prev = 1e300;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts.time[i] > 30.02 && ts.time[i] < 45.0) {
            CHECK(ts.pv_w[0][i] < prev);
            prev = ts.pv_w[0][i];
        }
    }
}

TEST_CASE("algebraic balance for the load drop") {
    Scenario sc = preset_scenario("case2");
    sc.mode = ControllerMode::proposed_vsg;
    CHECK(std::abs(steady_state_solve(sc).freq_hz - 50.14) <= 0.05);
}

namespace {

// Total variation of PV power after t0 beyond its net change: zero for a monotone
// response, growing with every reversal.
double excess_variation(const TimeSeries& ts, double t0) {
    double tv = 0.0;
    std::size_t first = 0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (ts.time[i] <= t0) {
            first = i;
            continue;
        }
        tv += std::abs(ts.pv_w[0][i] - ts.pv_w[0][i - 1]);
    }
    return tv - std::abs(ts.pv_w[0].back() - ts.pv_w[0][first]);
}

} // namespace

TEST_CASE("rotor-based support is smoother than the washout baseline") {
    const TimeSeries prc = run_scenario(short_case1(ControllerMode::prc_vsg, 60.0));
    const TimeSeries vsg = run_scenario(short_case1(ControllerMode::proposed_vsg, 60.0));
    const double ev_prc = excess_variation(prc, 30.0);
    const double ev_vsg = excess_variation(vsg, 30.0);
    MESSAGE("excess variation prc_vsg " << ev_prc << " W, proposed " << ev_vsg << " W");
    CHECK(ev_vsg < ev_prc);
    CHECK(compute_metrics(vsg).pv[0].peak > compute_metrics(vsg).pv[0].low);
}

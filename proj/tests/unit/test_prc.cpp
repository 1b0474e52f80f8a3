#include "pvvsg/controller.hpp"
#include "pvvsg/errors.hpp"
#include "pvvsg/prc.hpp"
#include "pvvsg/sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace pvvsg;

TEST_CASE("k1 saturates the step at 5 percent of rating") {
    const double k1 = default_k1(0.5, 210.0, 15e3);
    CHECK(prc_delta(k1, 0.05 * 15e3, 210.0, 0.5) == doctest::Approx(0.5));
    CHECK(prc_delta(k1, 0.025 * 15e3, 210.0, 0.5) == doctest::Approx(0.25));
    CHECK(prc_delta(k1, -1e6, 210.0, 0.5) == -0.5);
    CHECK_THROWS_AS(default_k1(0.0, 210.0, 15e3), DomainError);
    CHECK_THROWS_AS(prc_delta(k1, 1.0, 0.0, 0.5), DomainError);
}

TEST_CASE("voltage reference saturation") {
    CHECK(saturate_vref(100.0, 150.0, 270.0) == 150.0);
    CHECK(saturate_vref(300.0, 150.0, 270.0) == 270.0);
    CHECK(saturate_vref(200.0, 150.0, 270.0) == 200.0);
    CHECK_THROWS_AS(saturate_vref(200.0, 280.0, 270.0), DomainError);
}

TEST_CASE("step direction and shift sign") {
    PvUnitConfig u;
    const auto de = resolve_deloaded_curve(u);
    PrcState st{200.0, 1e4, 0.5, 150.0};
    // Above the curve the reference rises toward it, below it falls.
    const double v = 200.0;
    const double p_on = de.eval(v);
    CHECK(prc_step(st, v, p_on + 100.0, de, 0.0, 270.0).v_ref > 200.0);
    CHECK(prc_step(st, v, p_on - 100.0, de, 0.0, 270.0).v_ref < 200.0);
    CHECK(prc_step(st, v, p_on, de, 0.0, 270.0).v_ref == doctest::Approx(200.0));
    // A positive shift lowers the tracked curve under the operating point: more power.
    CHECK(prc_step(st, v, p_on, de, 2.0, 270.0).v_ref > 200.0);
    CHECK_THROWS_AS(prc_step(st, std::nan(""), 1.0, de, 0.0, 270.0), DomainError);
}

TEST_CASE("tracker settles without chatter at every irradiance") {
    PvUnitConfig u;
    const auto de = resolve_deloaded_curve(u);
    const auto pm = resolve_pmax_curve(u);
    const PvControlParams c = resolve_control(u, de);
    for (double s : {200.0, 500.0, 800.0, 1000.0}) {
        const MppResult m = find_mpp(s, 25.0, u.array);
        const double target = deloaded_intersection(u, de, s);
        PvController ctl(ControllerMode::none, de, pm, c, 160.0, m.v_mpp);
        double v = 160.0;
        double last_step = 0.0;
        for (int k = 0; k < 3000; ++k) {
            const double next = ctl.step(kOmega0, v, pv_power(v, s, 25.0, u.array), 1e-3);
            last_step = next - v;
            v = next;
        }
        CHECK(std::abs(v - target) < 1e-6);
        CHECK(std::abs(last_step) < 1e-6);
    }
}

TEST_CASE("start at 70 percent of the MPP voltage reaches the reserve") {
    PvUnitConfig u;
    const auto de = resolve_deloaded_curve(u);
    const auto pm = resolve_pmax_curve(u);
    const MppResult m = find_mpp(1000.0, 25.0, u.array);
    double v = 0.7 * m.v_mpp;
    PvController c(ControllerMode::none, de, pm, resolve_control(u, de), v, m.v_mpp);
    for (int k = 0; k < 2000; ++k) {
        v = c.step(kOmega0, v, pv_power(v, 1000.0, 25.0, u.array), 1e-3);
    }
    CHECK(std::abs(1.0 - pv_power(v, 1000.0, 25.0, u.array) / m.p_mpp - 0.2) <= 0.01);
    CHECK(saturate_vref(300.0, 150.0, 273.5) == 273.5);
}

#include "pvvsg/controller.hpp"
#include "pvvsg/errors.hpp"
#include "pvvsg/sim.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace pvvsg;

namespace {

struct Bench {
    PvUnitConfig unit;
    PiecewiseLinearCurve de = resolve_deloaded_curve(unit);
    PiecewiseLinearCurve pm = resolve_pmax_curve(unit);
    PvControlParams control = resolve_control(unit, de);

    PvController make(ControllerMode mode, double v0 = 180.0) const {
        return PvController(mode, de, pm, control, v0, find_mpp(900.0, 25.0, unit.array).v_mpp);
    }
};

} // namespace

TEST_CASE("mode names") {
    CHECK(parse_mode("none") == ControllerMode::none);
    CHECK(parse_mode("prc_vsg") == ControllerMode::prc_vsg);
    CHECK(parse_mode("proposed") == ControllerMode::proposed_vsg);
    CHECK(to_string(ControllerMode::proposed_vsg) == "proposed_vsg");
    CHECK_THROWS_AS(parse_mode("vsg"), ConfigError);
}

TEST_CASE("only the washout baseline differentiates frequency") {
    const Bench b;
    for (auto mode : {ControllerMode::none, ControllerMode::prc_vsg, ControllerMode::proposed_vsg}) {
        PvController c = b.make(mode);
        double v = 180.0;
        for (int k = 0; k < 500; ++k) {
            const double omega = kOmega0 * (1.0 - 0.002 * std::sin(0.01 * k));
            v = c.step(omega, v, pv_power(v, 900.0, 25.0, b.unit.array), 1e-3);
        }
        CHECK(c.derivative_evaluations() == (mode == ControllerMode::prc_vsg ? 500u : 0u));
    }
}

TEST_CASE("proposed controller follows plain tracking at nominal frequency") {
    const Bench b;
    const double v0 = deloaded_intersection(b.unit, b.de, 900.0);
    PvController plain = b.make(ControllerMode::none, v0);
    PvController vsg = b.make(ControllerMode::proposed_vsg, v0);
    double v1 = v0;
    double v2 = v0;
    double worst = 0.0;
    for (int k = 0; k < 6000; ++k) {
        const double s = k < 1000 ? 900.0 : (k < 3500 ? 700.0 : 950.0);
        const double p1 = pv_power(v1, s, 25.0, b.unit.array);
        const double p2 = pv_power(v2, s, 25.0, b.unit.array);
        worst = std::max(worst, std::abs(p1 - p2) / p1);
        v1 = plain.step(kOmega0, v1, p1, 1e-3);
        v2 = vsg.step(kOmega0, v2, p2, 1e-3);
    }
    CHECK(worst <= 1e-3);
    CHECK(std::abs(vsg.shift()) < 1e-3);
}

TEST_CASE("power limit holds the virtual rotor") {
    // A deep, lasting dip asks for more than the array can give.
    const Bench b;
    const double v0 = deloaded_intersection(b.unit, b.de, 900.0);
    PvController c = b.make(ControllerMode::proposed_vsg, v0);
    const double omega = 0.97 * kOmega0;
    double v = v0;
    double peak_shift = 0.0;
    for (int k = 0; k < 20000; ++k) {
        v = c.step(omega, v, pv_power(v, 900.0, 25.0, b.unit.array), 1e-3);
        peak_shift = std::max(peak_shift, c.shift());
    }
    CHECK(c.v_ref() == c.vmpp_hat());
    CHECK(peak_shift <= c.vmpp_hat() - b.control.v_min + 1.0);
    CHECK(std::abs(c.vsg_state().omega_s - omega) < 1e-6);
}

TEST_CASE("frequency measurement lag is first order") {
    const Bench b;
    PvController c = b.make(ControllerMode::proposed_vsg);
    const double omega = kOmega0 - 1.0;
    double v = 180.0;
    for (int k = 1; k <= 100; ++k) {
        v = c.step(omega, v, pv_power(v, 900.0, 25.0, b.unit.array), 1e-3);
        const double expected = kOmega0 - (1.0 - std::exp(-k * 1e-3 / b.control.pll_tau));
        CHECK(c.omega_measured() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("estimates follow the operating point") {
    const Bench b;
    PvController c = b.make(ControllerMode::none);
    double v = 180.0;
    for (int k = 0; k < 3000; ++k) {
        v = c.step(kOmega0, v, pv_power(v, 900.0, 25.0, b.unit.array), 1e-3);
    }
    CHECK(std::abs(c.vmpp_hat() - find_mpp(900.0, 25.0, b.unit.array).v_mpp) < 2.0);
    CHECK(c.p_de0() == doctest::Approx(pv_power(v, 900.0, 25.0, b.unit.array)).epsilon(0.01));
    CHECK(c.estimator_fallbacks() == 0);
}

TEST_CASE("constructor rejects bad settings") {
    Bench b;
    b.control.k1 = 0.0;
    CHECK_THROWS_AS(b.make(ControllerMode::none), DomainError);
}

#include "pvvsg/vsg.hpp"

#include "pvvsg/errors.hpp"

#include <cmath>

namespace pvvsg {

void validate(const VsgParams& p) {
    if (!(p.j > 0.0) || !(p.d >= 0.0) || !(p.ds >= 0.0) || !(p.dp >= 0.0) || !(p.a > 0.0) || !(p.omega0 > 0.0) ||
        !(p.p_base > 0.0)) {
        throw DomainError("vsg: require j > 0, d >= 0, ds >= 0, dp >= 0, a > 0, omega0 > 0, p_base > 0");
    }
}

void validate(const PrcVsgParams& p) {
    if (!(p.j >= 0.0) || !(p.dp >= 0.0) || !(p.tau > 0.0) || !(p.omega0 > 0.0) ||
        !(p.p_base > 0.0)) {
        throw DomainError("prc_vsg: require j >= 0, dp >= 0, tau > 0, omega0 > 0, p_base > 0");
    }
}

double droop_power(double omega_g, const VsgParams& p) {
    return p.dp * (p.omega0 - omega_g) / p.omega0 * p.p_base;
}

VsgStepResult vsg_step(const VsgState& state, double omega_g, double p_de, double p_pv,
                       double dt, const VsgParams& p) {
    if (!(dt > 0.0)) {
        throw DomainError("vsg_step: dt must be > 0");
    }
    if (std::abs(omega_g - p.omega0) > 0.05 * p.omega0) {
        throw InstabilityError("vsg_step: grid frequency outside +-5 % band", 0.0);
    }
    VsgStepResult out;
    out.p_command = p_de + droop_power(omega_g, p);
    out.state = state;
    out.state.t_m = out.p_command / state.omega_s;
    out.state.t_e = p_pv / state.omega_s;

    const double t_base = p.p_base / p.omega0;
    const double accel = p.omega0 / p.j *
                         ((out.state.t_m - out.state.t_e) / t_base -
                          p.d * (state.omega_s - p.omega0) / p.omega0 -
                          p.ds * (state.omega_s - omega_g) / p.omega0);
    out.state.omega_s = state.omega_s + dt * accel;
    if (!(out.state.omega_s > 0.0) || !std::isfinite(out.state.omega_s)) {
        throw InstabilityError("vsg_step: virtual rotor speed left the physical range", 0.0);
    }
    out.delta_v = p.a * (out.state.omega_s - omega_g);
    out.state.shift = state.shift + out.delta_v;
    return out;
}

PrcVsgResult prc_vsg_power(const PrcVsgState& state, double omega_g, double dt,
                           const PrcVsgParams& p) {
    if (!(dt > 0.0)) {
        throw DomainError("prc_vsg_power: dt must be > 0");
    }
    PrcVsgResult out;
    out.state.washout =
        (p.tau * state.washout + omega_g - state.omega_g_filtered) / (p.tau + dt);
    out.state.omega_g_filtered = omega_g;
    const double rocof = out.state.washout;
    out.p_f = p.p_base * (-p.j * (omega_g / p.omega0) * rocof / p.omega0 +
                          p.dp * (p.omega0 - omega_g) / p.omega0);
    if (!std::isfinite(out.p_f)) {
        throw InstabilityError("prc_vsg_power: non-finite inertia power", 0.0);
    }
    return out;
}

} // namespace pvvsg

#include "pvvsg/grid.hpp"

#include "pvvsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pvvsg {

void validate(const DieselParams& p) {
    if (!(p.p_rated > 0.0) || !(p.r > 0.0 && p.r < 1.0) || !(p.t_sm > 0.0) || !(p.t_d > 0.0) ||
        !(p.h_d > 0.0) || !(p.p_inertia > 0.0) || !(p.p_ref >= 0.0 && p.p_ref <= p.p_rated)) {
        throw DomainError("diesel: invalid parameters");
    }
}

double diesel_command(double omega_g, const DieselParams& p) {
    const double u = p.p_ref + p.p_rated * (p.omega0 - omega_g) / (p.omega0 * p.r);
    return std::clamp(u, 0.0, p.p_rated);
}

DieselState diesel_equilibrium(double omega_g, const DieselParams& p) {
    const double u = diesel_command(omega_g, p);
    return {u, u};
}

DieselStepResult diesel_step(const DieselState& s, double omega_g, double dt,
                             const DieselParams& p) {
    if (!(dt > 0.0)) {
        throw DomainError("diesel_step: dt must be > 0");
    }
    const double u = diesel_command(omega_g, p);
    const double e1 = std::exp(-dt / p.t_sm);
    const double e2 = std::exp(-dt / p.t_d);
    const double y1 = s.valve - u;
    const double y2 = s.engine - u;
    DieselStepResult out;
    out.state.valve = u + y1 * e1;
    if (p.t_sm != p.t_d) {
        out.state.engine = u + y2 * e2 + y1 * p.t_sm / (p.t_sm - p.t_d) * (e1 - e2);
    } else {
        out.state.engine = u + (y2 + y1 * dt / p.t_d) * e2;
    }
    out.p_mech = std::clamp(out.state.engine, 0.0, p.p_rated);
    return out;
}

void validate(const BatteryVsgParams& p) {
    if (!(p.p_rated > 0.0) || !(p.dp_b >= 0.0) || !(p.j_b > 0.0) || !(p.d_b > 0.0) ||
        !(std::abs(p.p_ref) <= p.p_rated)) {
        throw DomainError("battery: invalid parameters");
    }
}

double battery_output(const BatteryState& s, double omega_g, const BatteryVsgParams& p) {
    const double p_m = std::clamp(p.p_ref + p.dp_b * p.p_rated * (p.omega0 - s.omega_s) / p.omega0,
                                  -p.p_rated, p.p_rated);
    const double p_e = p_m + p.d_b * p.p_rated * (s.omega_s - omega_g) / p.omega0;
    return std::clamp(p_e, -p.p_rated, p.p_rated);
}

BatteryStepResult battery_step(const BatteryState& s, double omega_g, double dt,
                               const BatteryVsgParams& p) {
    if (!(dt > 0.0)) {
        throw DomainError("battery_step: dt must be > 0");
    }
    // J dw/dt = -D (w - w_g), integrated exactly with omega_g held over the step.
    BatteryStepResult out;
    out.state.omega_s = omega_g + (s.omega_s - omega_g) * std::exp(-dt * p.d_b / p.j_b);
    out.p_out = battery_output(out.state, omega_g, p);
    return out;
}

CoiParams coi_params(const DieselParams& diesel, double d_load) {
    CoiParams c;
    c.m_sys = 2.0 * diesel.h_d * diesel.p_inertia / diesel.omega0;
    c.d_load = d_load;
    c.omega0 = diesel.omega0;
    return c;
}

MicrogridState coi_step(const MicrogridState& state, std::span<const double> injections,
                        double p_load, double dt, const CoiParams& c, double time) {
    if (!(dt > 0.0)) {
        throw DomainError("coi_step: dt must be > 0");
    }
    const double sum = std::accumulate(injections.begin(), injections.end(), 0.0);
    const double dw = state.omega_g - c.omega0;
    const double damping = c.d_load * p_load / c.omega0 * dw;
    MicrogridState next = state;
    next.omega_g = state.omega_g + dt * (sum - p_load - damping) / c.m_sys;
    next.p_load = p_load;
    if (!std::isfinite(next.omega_g) || std::abs(next.omega_g - c.omega0) > c.band * c.omega0) {
        throw InstabilityError("grid frequency left the +-10 % band", time);
    }
    return next;
}

} // namespace pvvsg

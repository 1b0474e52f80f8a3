#pragma once

#include "pvvsg/vsg.hpp"

#include <span>

namespace pvvsg {

struct DieselParams {
    double p_rated = 87.5e3; // droop base and output limit, W
    double p_ref = 31.0e3;
    double r = 0.05;
    double t_sm = 0.05;
    double t_d = 0.5;
    double h_d = 3.0;
    double p_inertia = 50.0e3; // machine rating the inertia constant refers to, W
    double omega0 = kOmega0;

    bool operator==(const DieselParams&) const = default;
};

void validate(const DieselParams& params);

struct DieselState {
    double valve = 0.0;  // W
    double engine = 0.0; // W
};

DieselState diesel_equilibrium(double omega_g, const DieselParams& params);

/// Governor command p_ref + p_rated*(omega0 - omega_g)/(omega0 R) clamped to [0, p_rated].
double diesel_command(double omega_g, const DieselParams& params);

struct DieselStepResult {
    DieselState state;
    double p_mech = 0.0;
};

/// Valve and engine lags advanced exactly over dt with the command held constant.
DieselStepResult diesel_step(const DieselState& state, double omega_g, double dt,
                             const DieselParams& params);

struct BatteryVsgParams {
    double p_rated = 10.0e3;
    double p_ref = 5.0e3;
    double dp_b = 25.0; // per unit on p_rated
    double j_b = 0.5;   // s, per unit
    double d_b = 5.0;   // per unit on p_rated per unit slip
    double omega0 = kOmega0;

    bool operator==(const BatteryVsgParams&) const = default;
};

void validate(const BatteryVsgParams& params);

struct BatteryState {
    double omega_s = kOmega0;
};

struct BatteryStepResult {
    BatteryState state;
    double p_out = 0.0;
};

/// Droop governor on the virtual rotor speed; the electrical output adds the
/// damping flow between rotor and bus, which also drives the swing.
BatteryStepResult battery_step(const BatteryState& state, double omega_g, double dt,
                               const BatteryVsgParams& params);

/// Output the battery would deliver at the given state without advancing it.
double battery_output(const BatteryState& state, double omega_g, const BatteryVsgParams& params);

struct CoiParams {
    double m_sys = 0.0;  // W s^2/rad
    double d_load = 1.0; // per unit load change per unit frequency
    double omega0 = kOmega0;
    double band = 0.10; // abort outside +-band around omega0
};

CoiParams coi_params(const DieselParams& diesel, double d_load);

struct MicrogridState {
    double omega_g = kOmega0;
    DieselState diesel;
    BatteryState battery;
    double p_load = 0.0;
};

/// Explicit Euler on M dw/dt = sum(inj) - p_load - D_load (w - w0), D_load = d_load p_load / w0.
MicrogridState coi_step(const MicrogridState& state, std::span<const double> injections,
                        double p_load, double dt, const CoiParams& params, double time = 0.0);

} // namespace pvvsg

#pragma once

// Virtual synchronous machine emulated on the DC-DC stage of a PV unit, and the
// washout-based inertia baseline it is compared against.

#include <numbers>

namespace pvvsg {

inline constexpr double kOmega0 = 2.0 * std::numbers::pi * 50.0;

/// Gains are per unit on p_base with time in seconds; a is volts of curve shift
/// per rad/s of slip, applied once per control period. d damps the rotor
/// against omega0, ds against the measured grid frequency (slip).
struct VsgParams {
    double j = 1.06;
    double d = 0.0;
    double ds = 10.0;
    double dp = 40.0;
    double a = 2.0;
    double omega0 = kOmega0;
    double p_base = 15.0e3;

    bool operator==(const VsgParams&) const = default;
};

void validate(const VsgParams& params);

struct VsgState {
    double omega_s = kOmega0;
    double shift = 0.0;
    double t_m = 0.0;
    double t_e = 0.0;
};

struct VsgStepResult {
    VsgState state;
    double delta_v = 0.0;
    double p_command = 0.0; // p_de + droop increment
};

/// Droop increment Dp*(omega0 - omega_g)/omega0 in watts.
double droop_power(double omega_g, const VsgParams& params);

VsgStepResult vsg_step(const VsgState& state, double omega_g, double p_de, double p_pv,
                       double dt, const VsgParams& params);

struct PrcVsgParams {
    double j = 1.06;
    double dp = 40.0;
    double tau = 0.1;
    double omega0 = kOmega0;
    double p_base = 15.0e3;

    bool operator==(const PrcVsgParams&) const = default;
};

void validate(const PrcVsgParams& params);

/// Backward-Euler washout s/(tau s + 1) acting on omega_g.
struct PrcVsgState {
    double washout = 0.0;
    double omega_g_filtered = kOmega0; // last input sample
};

struct PrcVsgResult {
    PrcVsgState state;
    double p_f = 0.0;
};

PrcVsgResult prc_vsg_power(const PrcVsgState& state, double omega_g, double dt,
                           const PrcVsgParams& params);

} // namespace pvvsg

#pragma once

// Single-diode PV array model: implicit current solve, power and MPP search.

#include <string_view>

namespace pvvsg {

/// Electrical constants of one module plus the series/parallel arrangement.
/// Thermal coefficients are fractions per degree C (the datasheet lists %/degC).
struct PvArrayParams {
    double voc_stc = 64.2;       // V, per module
    double isc_stc = 5.96;       // A, per module
    double alpha = 0.061745e-2;  // short-circuit current coefficient, 1/degC
    double beta = -0.27269e-2;   // open-circuit voltage coefficient, 1/degC
    double a_diode = 0.94504;    // ideality factor per cell
    double cells = 96;           // cells in series per module
    double rs = 0.37152;         // ohm, per module
    double rsh = 269.5934;       // ohm, per module
    int ns = 5;                  // modules in series
    int np = 66;                 // strings in parallel
    double s_stc = 1000.0;       // W/m^2
    double t_stc = 25.0;         // degC

    bool operator==(const PvArrayParams&) const = default;
};

/// Validates invariants, throws DomainError.
void validate(const PvArrayParams& params);

/// Array preset whose curves are published (Ns = 5, Np = 66, ~100 kW at STC).
PvArrayParams preset_table_a2();
/// Same module, Np = 10: ~15 kW at STC, the per-unit rating used in the microgrid.
PvArrayParams preset_grid15kw();
/// Looks up "tableA2" or "grid15kW"; throws DomainError otherwise.
PvArrayParams preset_by_name(std::string_view name);

struct OperatingPoint {
    double v_pv = 0.0;
    double i_pv = 0.0;
    double p_pv = 0.0;
    double s = 0.0;
    double temp = 25.0;
};

/// Per-module quantities derived from (s, temp) that the implicit equation needs.
struct DiodeTerms {
    double vt = 0.0;   // module thermal voltage A*Ncell*k*T/q
    double iph = 0.0;  // photocurrent
    double i0 = 0.0;   // reverse saturation current
    double voc = 0.0;  // module open-circuit voltage
};

DiodeTerms diode_terms(double s, double temp, const PvArrayParams& params);

/// Array open-circuit voltage. s must be > 0.
double open_circuit_voltage(double s, double temp, const PvArrayParams& params);

/// Array current at terminal voltage v_pv. Clamped to >= 0.
double pv_current(double v_pv, double s, double temp, const PvArrayParams& params);

/// Residual of the implicit diode equation at module level, relative to the
/// photocurrent (absolute when the photocurrent is zero).
double pv_residual(double v_pv, double i_pv, double s, double temp, const PvArrayParams& params);

double pv_power(double v_pv, double s, double temp, const PvArrayParams& params);

OperatingPoint operating_point(double v_pv, double s, double temp, const PvArrayParams& params);

struct MppResult {
    double v_mpp = 0.0;
    double p_mpp = 0.0;
};

/// Golden-section search over [0, Voc]. s must be > 0.
MppResult find_mpp(double s, double temp, const PvArrayParams& params);

/// Voltage on the up-hill branch (v < v_mpp) where the array delivers p_target.
/// Bisection; throws SolverError when p_target is not bracketed by [0, p_mpp].
double uphill_voltage_for_power(double p_target, double s, double temp,
                                const PvArrayParams& params, const MppResult& mpp);

} // namespace pvvsg

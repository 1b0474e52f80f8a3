#pragma once

#include "pvvsg/scenario.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pvvsg {

struct TimeSeries {
    std::vector<double> time;
    std::vector<double> freq_hz;
    std::vector<double> diesel_w;
    std::vector<double> battery_w;
    std::vector<std::vector<double>> pv_w; // [unit][sample]
    std::vector<std::vector<double>> pv_v;
    std::vector<std::vector<double>> reserve;
    std::vector<double> load_w;

    std::size_t size() const { return time.size(); }
    std::size_t units() const { return pv_w.size(); }
    bool operator==(const TimeSeries&) const = default;
};

struct PowerStats {
    double peak = 0.0;
    double low = 0.0;
    double steady = 0.0;
};

struct Metrics {
    double nadir = 0.0;
    double peak = 0.0;
    double steady = 0.0;
    double rms = 0.0;
    double rmse = 0.0;
    double max_dev = 0.0;
    double final_freq = 0.0;
    PowerStats diesel;
    PowerStats battery;
    std::vector<PowerStats> pv;
};

struct MetricsWindow {
    double t_begin = 0.0;
    double t_end = 1e300;
    double steady_window = 5.0;
};

/// Throws DomainError when no sample falls in the window.
Metrics compute_metrics(const TimeSeries& ts, const MetricsWindow& window = {});

struct UnitDiagnostics {
    std::size_t derivative_evaluations = 0;
    std::size_t estimator_fallbacks = 0;
    double final_shift = 0.0;
    double final_omega_s = 0.0;
};

struct SimulationResult {
    TimeSeries series;
    std::vector<UnitDiagnostics> units;
    std::vector<PiecewiseLinearCurve> deloaded_curves;
    std::vector<PiecewiseLinearCurve> pmax_curves;
};

/// Deterministic fixed-step run; InstabilityError carries the abort time.
SimulationResult simulate(const Scenario& scenario);
TimeSeries run_scenario(const Scenario& scenario);

/// Curves used by a unit after resolving its configured source.
PiecewiseLinearCurve resolve_deloaded_curve(const PvUnitConfig& unit);
PiecewiseLinearCurve resolve_pmax_curve(const PvUnitConfig& unit);

/// Control parameters with the automatic power base and k1 filled in.
PvControlParams resolve_control(const PvUnitConfig& unit, const PiecewiseLinearCurve& de_curve);

/// Voltage where the unit's P-V curve meets its de-loaded curve on the up-hill branch.
double deloaded_intersection(const PvUnitConfig& unit, const PiecewiseLinearCurve& de_curve,
                             double s);

struct SteadyState {
    double freq_hz = 50.0;
    double diesel_w = 0.0;
    double battery_w = 0.0;
    std::vector<double> pv_w;
    double load_w = 0.0;
};

/// Algebraic droop balance after the last event. Throws DomainError if the
/// irradiance never settles and SolverError if no root lies within +-1 Hz.
SteadyState steady_state_solve(const Scenario& scenario);

} // namespace pvvsg

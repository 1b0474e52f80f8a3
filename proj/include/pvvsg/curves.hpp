#pragma once

// Four-segment piecewise-linear power-voltage curves: the de-loaded reserve
// curve tracked by the PV controller and the maximum-power locus used to
// estimate the MPP voltage.

#include "pvvsg/pv_model.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pvvsg {

/// P(v) = slopes[i] * v + intercepts[i] on segment i, where segment 0 covers
/// [0, breakpoints[0]) and segment 3 covers [breakpoints[2], inf).
struct PiecewiseLinearCurve {
    std::array<double, 3> breakpoints{};
    std::array<double, 4> slopes{};
    std::array<double, 4> intercepts{};

    bool operator==(const PiecewiseLinearCurve&) const = default;

    std::size_t segment(double v) const;
    double eval(double v) const;
    /// Lower voltage bound of a segment (0 for the first).
    double segment_begin(std::size_t i) const;
    /// Upper voltage bound of a segment (+inf for the last).
    double segment_end(std::size_t i) const;
};

/// Relative jump at breakpoint i, |right - left| / |left|.
double discontinuity(const PiecewiseLinearCurve& curve, std::size_t i);

/// Throws DomainError unless breakpoints ascend, the first intercept is zero and
/// every jump is within max_jump.
void validate(const PiecewiseLinearCurve& curve, double max_jump = 0.02);

/// Published coefficients of the d = 20 % de-loaded curve for the tableA2 array.
PiecewiseLinearCurve table_a3_deloaded();
/// Published coefficients of the maximum-power locus for the tableA2 array.
PiecewiseLinearCurve table_a3_max_power();

/// Curve scaled to an array with a different parallel count (power is linear in Np).
PiecewiseLinearCurve scale_power(const PiecewiseLinearCurve& curve, double factor);

struct LocusPoint {
    double v = 0.0;
    double p = 0.0;
};

/// Irradiances 100, 110, ..., 1000 W/m^2.
std::vector<double> default_irradiance_grid();

std::vector<LocusPoint> deloaded_locus(const PvArrayParams& params, double d,
                                       std::span<const double> s_grid, double temp = 25.0);
std::vector<LocusPoint> max_power_locus(const PvArrayParams& params,
                                        std::span<const double> s_grid, double temp = 25.0);

/// Continuous four-segment least-squares fit through the origin. Residuals are
/// relative (weighted by 1/p); the three breakpoints are searched on a grid of
/// candidate_step volts spanning the locus.
PiecewiseLinearCurve fit_locus(std::span<const LocusPoint> locus, double candidate_step = 1.0);

PiecewiseLinearCurve fit_deloaded_curve(const PvArrayParams& params, double d,
                                        std::span<const double> s_grid, double temp = 25.0);
PiecewiseLinearCurve fit_pmax_curve(const PvArrayParams& params,
                                    std::span<const double> s_grid, double temp = 25.0);

/// Voltage where the ray p = k v meets segments 2..4 of the curve; among
/// in-range candidates the largest wins. Empty when no segment qualifies.
std::optional<double> ray_intersection(const PiecewiseLinearCurve& curve, double k);

/// MPP voltage estimate from one measured point on the up-hill branch.
/// Throws EstimationError when no segment intersection lies in its own range.
double estimate_vmpp(double v_pv, double p_pv, const PiecewiseLinearCurve& pmax_curve);

} // namespace pvvsg

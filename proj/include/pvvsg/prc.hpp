#pragma once

#include "pvvsg/curves.hpp"

namespace pvvsg {

struct PrcState {
    double v_ref = 0.0;
    double k1 = 0.0;     // V^4/W
    double dv_max = 0.5; // V per control period
    double v_min = 150.0;
};

/// Gain that saturates the step at dv_max once |dP| reaches 5 % of p_rated at v_op.
/// Evaluated at the STC de-loaded point, where the curve segments are steepest;
/// at v_mpp the discrete loop gain exceeds 2 there and the tracker chatters.
double default_k1(double dv_max, double v_op, double p_rated);

double saturate_vref(double v, double v_min, double vmpp_hat);

/// Variable step k1*dP/v^3 clamped to +-dv_max.
double prc_delta(double k1, double dp, double v_pv, double dv_max);

/// One tracking step toward the intersection of the P-V curve with the de-loaded
/// curve shifted right by `shift` volts.
PrcState prc_step(const PrcState& state, double v_pv, double p_pv,
                  const PiecewiseLinearCurve& de_curve, double shift, double vmpp_hat);

} // namespace pvvsg

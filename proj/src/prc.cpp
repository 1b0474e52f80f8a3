#include "pvvsg/prc.hpp"

#include "pvvsg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pvvsg {

double default_k1(double dv_max, double v_op, double p_rated) {
    if (!(dv_max > 0.0) || !(v_op > 0.0) || !(p_rated > 0.0)) {
        throw DomainError("default_k1: arguments must be > 0");
    }
    return dv_max * v_op * v_op * v_op / (0.05 * p_rated);
}

double saturate_vref(double v, double v_min, double vmpp_hat) {
    if (!(v_min < vmpp_hat)) {
        throw DomainError("saturate_vref: v_min must be below the MPP estimate");
    }
    return std::clamp(v, v_min, vmpp_hat);
}

double prc_delta(double k1, double dp, double v_pv, double dv_max) {
    if (!(v_pv > 0.0)) {
        throw DomainError("prc: v_pv must be > 0");
    }
    return std::clamp(k1 * dp / (v_pv * v_pv * v_pv), -dv_max, dv_max);
}

PrcState prc_step(const PrcState& state, double v_pv, double p_pv,
                  const PiecewiseLinearCurve& de_curve, double shift, double vmpp_hat) {
    if (!std::isfinite(v_pv) || !std::isfinite(p_pv) || !std::isfinite(shift)) {
        throw DomainError("prc_step: non-finite input");
    }
    if (!(v_pv > 0.0)) {
        throw DomainError("prc_step: v_pv must be > 0");
    }
    const double dp = p_pv - de_curve.eval(std::max(0.0, v_pv - shift));
    PrcState next = state;
    next.v_ref = saturate_vref(state.v_ref + prc_delta(state.k1, dp, v_pv, state.dv_max),
                               state.v_min, vmpp_hat);
    return next;
}

} // namespace pvvsg

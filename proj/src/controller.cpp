#include "pvvsg/controller.hpp"

#include "pvvsg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pvvsg {

ControllerMode parse_mode(std::string_view text) {
    if (text == "none") {
        return ControllerMode::none;
    }
    if (text == "prc_vsg") {
        return ControllerMode::prc_vsg;
    }
    if (text == "proposed_vsg" || text == "proposed") {
        return ControllerMode::proposed_vsg;
    }
    throw ConfigError("unknown controller mode '" + std::string(text) + "'", 0);
}

std::string to_string(ControllerMode mode) {
    switch (mode) {
    case ControllerMode::none:
        return "none";
    case ControllerMode::prc_vsg:
        return "prc_vsg";
    case ControllerMode::proposed_vsg:
        return "proposed_vsg";
    }
    return "unknown";
}

PvController::PvController(ControllerMode mode, PiecewiseLinearCurve de_curve,
                           PiecewiseLinearCurve pmax_curve, const PvControlParams& params,
                           double v_init, double vmpp_init, double omega_init)
    : mode_(mode), de_curve_(de_curve), pmax_curve_(pmax_curve), params_(params),
      vmpp_hat_(vmpp_init), omega_meas_(omega_init) {
    validate(params.vsg);
    validate(params.prc_vsg);
    if (!(params.dv_max > 0.0) || !(params.k1 > 0.0) || !(params.pll_tau >= 0.0)) {
        throw DomainError("controller: require dv_max > 0, k1 > 0, pll_tau >= 0");
    }
    if (!(v_init > 0.0) || !(vmpp_init > params.v_min)) {
        throw DomainError("controller: initial voltage or MPP estimate out of range");
    }
    prc_.v_ref = v_init;
    prc_.k1 = params.k1;
    prc_.dv_max = params.dv_max;
    prc_.v_min = params.v_min;
    vsg_.omega_s = omega_init;
    washout_.omega_g_filtered = omega_init;
    p_de0_ = de_curve_.eval(v_init);
}

void PvController::update_estimates(double v_pv, double p_pv) {
    if (!(p_pv > 0.0)) {
        ++estimator_fallbacks_;
        return;
    }
    try {
        vmpp_hat_ = std::max(estimate_vmpp(v_pv, p_pv, pmax_curve_), prc_.v_min + 1.0);
    } catch (const EstimationError&) {
        ++estimator_fallbacks_;
    }
    const double k = p_pv / v_pv;
    if (const auto v = ray_intersection(de_curve_, k)) {
        p_de0_ = k * *v;
    } else {
        p_de0_ = de_curve_.eval(v_pv);
    }
}

double PvController::step(double omega_g, double v_pv, double p_pv, double dt) {
    if (!(dt > 0.0)) {
        throw DomainError("controller: dt must be > 0");
    }
    if (params_.pll_tau > 0.0) {
        omega_meas_ += (omega_g - omega_meas_) * (-std::expm1(-dt / params_.pll_tau));
    } else {
        omega_meas_ = omega_g;
    }
    update_estimates(v_pv, p_pv);

    switch (mode_) {
    case ControllerMode::none:
        prc_ = prc_step(prc_, v_pv, p_pv, de_curve_, 0.0, vmpp_hat_);
        break;
    case ControllerMode::proposed_vsg: {
        // On a voltage limit the array cannot follow a command past the measured
        // power, so the command is capped there and the shift is held.
        const bool at_top = prc_.v_ref >= vmpp_hat_;
        const bool at_bottom = prc_.v_ref <= prc_.v_min;
        double p_de = p_de0_;
        const double droop = droop_power(omega_meas_, params_.vsg);
        if (at_top) {
            p_de = std::min(p_de, p_pv - droop);
        } else if (at_bottom) {
            p_de = std::max(p_de, p_pv - droop);
        }
        VsgStepResult r = vsg_step(vsg_, omega_meas_, p_de, p_pv, dt, params_.vsg);
        if ((r.delta_v > 0.0 && at_top) || (r.delta_v < 0.0 && at_bottom)) {
            r.state.shift = vsg_.shift;
        }
        const double window = vmpp_hat_ - prc_.v_min;
        r.state.shift = std::clamp(r.state.shift, -window, window);
        vsg_ = r.state;
        prc_ = prc_step(prc_, v_pv, p_pv, de_curve_, vsg_.shift, vmpp_hat_);
        break;
    }
    case ControllerMode::prc_vsg: {
        const PrcVsgResult r = prc_vsg_power(washout_, omega_meas_, dt, params_.prc_vsg);
        ++derivative_evals_;
        washout_ = r.state;
        const double target = p_de0_ + r.p_f;
        prc_.v_ref = saturate_vref(
            prc_.v_ref + prc_delta(prc_.k1, target - p_pv, v_pv, prc_.dv_max), prc_.v_min,
            vmpp_hat_);
        break;
    }
    }
    return prc_.v_ref;
}

PvController controller_select(ControllerMode mode, const PiecewiseLinearCurve& de_curve,
                               const PiecewiseLinearCurve& pmax_curve,
                               const PvControlParams& params, double v_init, double vmpp_init) {
    return PvController(mode, de_curve, pmax_curve, params, v_init, vmpp_init);
}

} // namespace pvvsg

#pragma once

#include "pvvsg/curves.hpp"
#include "pvvsg/prc.hpp"
#include "pvvsg/vsg.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace pvvsg {

enum class ControllerMode { none, prc_vsg, proposed_vsg };

/// Accepts "none", "prc_vsg", "proposed_vsg" (and "proposed"); ConfigError otherwise.
ControllerMode parse_mode(std::string_view text);
std::string to_string(ControllerMode mode);

struct PvControlParams {
    double k1 = 0.0; // 0 selects default_k1 at the STC de-loaded point
    double dv_max = 0.5;
    double v_min = 150.0;
    double pll_tau = 0.1; // first-order frequency measurement lag, s (0 disables)
    VsgParams vsg;
    PrcVsgParams prc_vsg;

    bool operator==(const PvControlParams&) const = default;
};

/// Per-unit control loop: de-loaded tracking, MPP-voltage estimation, and the
/// selected frequency-support variant. One call per control period.
class PvController {
public:
    PvController(ControllerMode mode, PiecewiseLinearCurve de_curve,
                 PiecewiseLinearCurve pmax_curve, const PvControlParams& params,
                 double v_init, double vmpp_init, double omega_init = kOmega0);

    /// Returns the new voltage reference.
    double step(double omega_g, double v_pv, double p_pv, double dt);

    ControllerMode mode() const { return mode_; }
    double v_ref() const { return prc_.v_ref; }
    double vmpp_hat() const { return vmpp_hat_; }
    double p_de0() const { return p_de0_; }
    double omega_measured() const { return omega_meas_; }
    const VsgState& vsg_state() const { return vsg_; }
    const PrcVsgState& prc_vsg_state() const { return washout_; }
    const PrcState& prc_state() const { return prc_; }
    double shift() const { return vsg_.shift; }
    /// Number of times d(omega_g)/dt was computed.
    std::size_t derivative_evaluations() const { return derivative_evals_; }
    std::size_t estimator_fallbacks() const { return estimator_fallbacks_; }

private:
    void update_estimates(double v_pv, double p_pv);

    ControllerMode mode_;
    PiecewiseLinearCurve de_curve_;
    PiecewiseLinearCurve pmax_curve_;
    PvControlParams params_;
    PrcState prc_;
    VsgState vsg_;
    PrcVsgState washout_;
    double vmpp_hat_;
    double p_de0_ = 0.0;
    double omega_meas_;
    std::size_t derivative_evals_ = 0;
    std::size_t estimator_fallbacks_ = 0;
};

PvController controller_select(ControllerMode mode, const PiecewiseLinearCurve& de_curve,
                               const PiecewiseLinearCurve& pmax_curve,
                               const PvControlParams& params, double v_init, double vmpp_init);

} // namespace pvvsg

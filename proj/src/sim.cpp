#include "pvvsg/sim.hpp"

#include "pvvsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pvvsg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct UnitSetup {
    PiecewiseLinearCurve de;
    PiecewiseLinearCurve pmax;
    PvControlParams control;
    double v0 = 0.0;
    double p0 = 0.0;
    double vmpp0 = 0.0;
};

} // namespace

PvControlParams resolve_control(const PvUnitConfig& u, const PiecewiseLinearCurve& de) {
    const MppResult stc = find_mpp(u.array.s_stc, u.array.t_stc, u.array);
    const double p_base = u.p_base > 0.0 ? u.p_base : stc.p_mpp;
    PvControlParams c = u.control;
    c.vsg.p_base = p_base;
    c.prc_vsg.p_base = p_base;
    if (!(c.k1 > 0.0)) {
        c.k1 = default_k1(c.dv_max, deloaded_intersection(u, de, u.array.s_stc), p_base);
    }
    return c;
}

namespace {

UnitSetup setup_unit(const PvUnitConfig& u, double s0) {
    UnitSetup out;
    out.de = resolve_deloaded_curve(u);
    out.pmax = resolve_pmax_curve(u);
    out.control = resolve_control(u, out.de);
    out.v0 = deloaded_intersection(u, out.de, s0);
    out.p0 = pv_power(out.v0, s0, u.temp, u.array);
    try {
        out.vmpp0 = estimate_vmpp(out.v0, out.p0, out.pmax);
    } catch (const EstimationError&) {
        out.vmpp0 = find_mpp(s0, u.temp, u.array).v_mpp;
    }
    out.vmpp0 = std::max(out.vmpp0, std::max(out.v0, out.control.v_min + 1.0));
    return out;
}

double initial_load(const Scenario& s, const std::vector<UnitSetup>& units) {
    if (s.p_load0) {
        return *s.p_load0;
    }
    double p = diesel_equilibrium(kOmega0, s.diesel).engine +
               battery_output(BatteryState{s.battery.omega0}, s.battery.omega0, s.battery);
    for (const UnitSetup& u : units) {
        p += u.p0;
    }
    return p;
}

// Maps every unit to the first unit with identical array and temperature so the
// expensive MPP evaluation for the reserve column is shared.
std::vector<std::size_t> share_groups(const std::vector<PvUnitConfig>& pv) {
    std::vector<std::size_t> group(pv.size());
    for (std::size_t i = 0; i < pv.size(); ++i) {
        group[i] = i;
        for (std::size_t j = 0; j < i; ++j) {
            if (pv[j].array == pv[i].array && pv[j].temp == pv[i].temp) {
                group[i] = j;
                break;
            }
        }
    }
    return group;
}

} // namespace

PiecewiseLinearCurve resolve_deloaded_curve(const PvUnitConfig& u) {
    switch (u.deloaded_source) {
    case CurveSource::fit: {
        const auto grid = default_irradiance_grid();
        return fit_deloaded_curve(u.array, u.reserve, grid, u.temp);
    }
    case CurveSource::table_a3:
        return scale_power(table_a3_deloaded(), u.array.np / 66.0);
    case CurveSource::explicit_coefficients:
        return u.deloaded_curve;
    }
    throw DomainError("unknown curve source");
}

PiecewiseLinearCurve resolve_pmax_curve(const PvUnitConfig& u) {
    switch (u.pmax_source) {
    case CurveSource::fit: {
        const auto grid = default_irradiance_grid();
        return fit_pmax_curve(u.array, grid, u.temp);
    }
    case CurveSource::table_a3:
        return scale_power(table_a3_max_power(), u.array.np / 66.0);
    case CurveSource::explicit_coefficients:
        return u.pmax_curve;
    }
    throw DomainError("unknown curve source");
}

double deloaded_intersection(const PvUnitConfig& u, const PiecewiseLinearCurve& de, double s) {
    const MppResult mpp = find_mpp(s, u.temp, u.array);
    auto g = [&](double v) { return pv_power(v, s, u.temp, u.array) - de.eval(v); };
    double lo = 1e-3 * mpp.v_mpp;
    double hi = mpp.v_mpp;
    if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) {
        throw SolverError("de-loaded curve does not cross the P-V curve on the up-hill branch",
                          g(hi));
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SimulationResult simulate(const Scenario& s) {
    validate(s);
    const auto ctrl_every = static_cast<std::size_t>(std::llround(s.dt_control / s.dt_grid));
    const auto out_every = static_cast<std::size_t>(std::llround(s.output_dt / s.dt_grid));
    const auto n_steps = static_cast<std::size_t>(std::llround(s.duration / s.dt_grid));
    const IrradianceProfile profile(s.irradiance0, s.irradiance);
    const std::size_t n_units = s.pv.size();

    std::vector<UnitSetup> setup;
    std::vector<PvController> ctrl;
    setup.reserve(n_units);
    ctrl.reserve(n_units);
    const double s0 = profile.at(0.0);
    for (const PvUnitConfig& u : s.pv) {
        setup.push_back(setup_unit(u, s0));
        const UnitSetup& us = setup.back();
        ctrl.push_back(controller_select(s.mode, us.de, us.pmax, us.control, us.v0, us.vmpp0));
    }
    const std::vector<std::size_t> group = share_groups(s.pv);

    MicrogridState grid;
    grid.omega_g = kOmega0;
    grid.diesel = diesel_equilibrium(kOmega0, s.diesel);
    grid.battery.omega_s = kOmega0;
    const double p_load0 = initial_load(s, setup);
    grid.p_load = p_load0;
    const CoiParams coi = coi_params(s.diesel, s.d_load);

    std::vector<double> v_pv(n_units), p_pv(n_units);
    for (std::size_t i = 0; i < n_units; ++i) {
        v_pv[i] = setup[i].v0;
        p_pv[i] = setup[i].p0;
    }
    double p_diesel = std::clamp(grid.diesel.engine, 0.0, s.diesel.p_rated);
    double p_battery = battery_output(grid.battery, grid.omega_g, s.battery);

    SimulationResult result;
    TimeSeries& ts = result.series;
    ts.pv_w.assign(n_units, {});
    ts.pv_v.assign(n_units, {});
    ts.reserve.assign(n_units, {});
    std::vector<double> mpp_s(n_units, -1.0), mpp_p(n_units, 0.0);

    std::vector<double> injections(n_units + 2);
    double t = 0.0;
    try {
        for (std::size_t n = 0; n <= n_steps; ++n) {
            t = static_cast<double>(n) * s.dt_grid;
            const double irr = profile.at(t);
            const double p_load = load_at(s, p_load0, t);
            const bool control = n % ctrl_every == 0;
            for (std::size_t i = 0; i < n_units; ++i) {
                const PvUnitConfig& u = s.pv[i];
                const double p_meas = pv_power(v_pv[i], irr, u.temp, u.array);
                if (control) {
                    v_pv[i] = ctrl[i].step(grid.omega_g, v_pv[i], p_meas, s.dt_control);
                    p_pv[i] = pv_power(v_pv[i], irr, u.temp, u.array);
                } else {
                    p_pv[i] = p_meas;
                }
            }

            if (n % out_every == 0) {
                ts.time.push_back(t);
                ts.freq_hz.push_back(grid.omega_g / kTwoPi);
                ts.diesel_w.push_back(p_diesel);
                ts.battery_w.push_back(p_battery);
                ts.load_w.push_back(p_load);
                for (std::size_t i = 0; i < n_units; ++i) {
                    const std::size_t g = group[i];
                    if (mpp_s[g] != irr) {
                        mpp_s[g] = irr;
                        mpp_p[g] = irr > 0.0 ? find_mpp(irr, s.pv[g].temp, s.pv[g].array).p_mpp
                                             : 0.0;
                    }
                    ts.pv_w[i].push_back(p_pv[i]);
                    ts.pv_v[i].push_back(v_pv[i]);
                    ts.reserve[i].push_back(mpp_p[g] > 0.0 ? 1.0 - p_pv[i] / mpp_p[g] : 0.0);
                }
            }
            if (n == n_steps) {
                break;
            }

            injections[0] = p_diesel;
            injections[1] = p_battery;
            std::copy(p_pv.begin(), p_pv.end(), injections.begin() + 2);
            const double omega_old = grid.omega_g;
            const MicrogridState next = coi_step(grid, injections, p_load, s.dt_grid, coi, t);
            const DieselStepResult d = diesel_step(grid.diesel, omega_old, s.dt_grid, s.diesel);
            const BatteryStepResult b =
                battery_step(grid.battery, omega_old, s.dt_grid, s.battery);
            grid = next;
            grid.diesel = d.state;
            grid.battery = b.state;
            p_diesel = d.p_mech;
            p_battery = battery_output(grid.battery, grid.omega_g, s.battery);
        }
    } catch (const InstabilityError& e) {
        throw InstabilityError(std::string(e.what()) + " (omega_g = " +
                                   std::to_string(grid.omega_g / kTwoPi) + " Hz)",
                               t);
    }

    for (std::size_t i = 0; i < n_units; ++i) {
        UnitDiagnostics d;
        d.derivative_evaluations = ctrl[i].derivative_evaluations();
        d.estimator_fallbacks = ctrl[i].estimator_fallbacks();
        d.final_shift = ctrl[i].shift();
        d.final_omega_s = ctrl[i].vsg_state().omega_s;
        result.units.push_back(d);
        result.deloaded_curves.push_back(setup[i].de);
        result.pmax_curves.push_back(setup[i].pmax);
    }
    return result;
}

TimeSeries run_scenario(const Scenario& scenario) { return simulate(scenario).series; }

Metrics compute_metrics(const TimeSeries& ts, const MetricsWindow& w) {
    std::size_t first = ts.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts.time[i] >= w.t_begin && ts.time[i] <= w.t_end) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first >= ts.size()) {
        throw DomainError("compute_metrics: window contains no samples");
    }
    const double t_steady = ts.time[last] - w.steady_window;
    auto stats = [&](const std::vector<double>& x) {
        PowerStats p{x[first], x[first], 0.0};
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = first; i <= last; ++i) {
            p.peak = std::max(p.peak, x[i]);
            p.low = std::min(p.low, x[i]);
            if (ts.time[i] >= t_steady) {
                sum += x[i];
                ++count;
            }
        }
        p.steady = sum / static_cast<double>(count);
        return p;
    };

    Metrics m;
    const PowerStats f = stats(ts.freq_hz);
    m.nadir = f.low;
    m.peak = f.peak;
    m.steady = f.steady;
    double sq = 0.0;
    double err = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double x = ts.freq_hz[i];
        sq += x * x;
        err += (x - 50.0) * (x - 50.0);
        m.max_dev = std::max(m.max_dev, std::abs(x - 50.0));
    }
    const auto n = static_cast<double>(last - first + 1);
    m.rms = std::sqrt(sq / n);
    m.rmse = std::sqrt(err / n);
    m.final_freq = ts.freq_hz[last];
    m.diesel = stats(ts.diesel_w);
    m.battery = stats(ts.battery_w);
    for (const auto& col : ts.pv_w) {
        m.pv.push_back(stats(col));
    }
    return m;
}

SteadyState steady_state_solve(const Scenario& s) {
    validate(s);
    const IrradianceProfile profile(s.irradiance0, s.irradiance);
    const double s_final = profile.final_value();
    std::vector<UnitSetup> setup;
    for (const PvUnitConfig& u : s.pv) {
        setup.push_back(setup_unit(u, profile.at(0.0)));
    }
    const double p_load0 = initial_load(s, setup);
    double p_load = p_load0;
    for (const LoadStep& l : s.loads) {
        p_load += l.delta_w;
    }

    struct FinalUnit {
        const PvUnitConfig* cfg;
        const UnitSetup* setup;
        double v_b;
        double p_b;
        double v_hi;
    };
    std::vector<FinalUnit> units;
    for (std::size_t i = 0; i < s.pv.size(); ++i) {
        const PvUnitConfig& u = s.pv[i];
        const double v_b = deloaded_intersection(u, setup[i].de, s_final);
        const double p_b = pv_power(v_b, s_final, u.temp, u.array);
        double v_hi;
        try {
            v_hi = estimate_vmpp(v_b, p_b, setup[i].pmax);
        } catch (const EstimationError&) {
            v_hi = find_mpp(s_final, u.temp, u.array).v_mpp;
        }
        units.push_back({&u, &setup[i], v_b, p_b, std::max(v_hi, v_b)});
    }

    auto pv_output = [&](const FinalUnit& fu, double omega) {
        if (s.mode == ControllerMode::none) {
            return fu.p_b;
        }
        const PvUnitConfig& u = *fu.cfg;
        const PvControlParams& c = fu.setup->control;
        double gain = s.mode == ControllerMode::proposed_vsg ? c.vsg.dp + c.vsg.d : c.prc_vsg.dp;
        const double dp = gain * c.vsg.p_base * (kOmega0 - omega) / kOmega0;
        auto p_de0 = [&](double v, double p) {
            const double k = p / v;
            const auto vs = ray_intersection(fu.setup->de, k);
            return vs ? k * *vs : fu.setup->de.eval(v);
        };
        auto h = [&](double v) {
            const double p = pv_power(v, s_final, u.temp, u.array);
            return p - p_de0(v, p) - dp;
        };
        double lo = dp >= 0.0 ? fu.v_b : c.v_min;
        double hi = dp >= 0.0 ? fu.v_hi : fu.v_b;
        if (h(hi) <= 0.0) {
            return pv_power(hi, s_final, u.temp, u.array);
        }
        if (h(lo) >= 0.0) {
            return pv_power(lo, s_final, u.temp, u.array);
        }
        for (int i = 0; i < 100 && hi - lo > 1e-10; ++i) {
            const double mid = 0.5 * (lo + hi);
            (h(mid) < 0.0 ? lo : hi) = mid;
        }
        return pv_power(0.5 * (lo + hi), s_final, u.temp, u.array);
    };

    auto battery_ss = [&](double omega) {
        return std::clamp(s.battery.p_ref +
                              s.battery.dp_b * s.battery.p_rated * (kOmega0 - omega) / kOmega0,
                          -s.battery.p_rated, s.battery.p_rated);
    };
    auto balance = [&](double omega) {
        double sum = diesel_command(omega, s.diesel) + battery_ss(omega);
        for (const FinalUnit& fu : units) {
            sum += pv_output(fu, omega);
        }
        return sum - p_load - s.d_load * p_load / kOmega0 * (omega - kOmega0);
    };

    double lo = kOmega0 - kTwoPi;
    double hi = kOmega0 + kTwoPi;
    if (!(balance(lo) > 0.0) || !(balance(hi) < 0.0)) {
        throw SolverError("steady_state_solve: no balance point within +-1 Hz", balance(kOmega0));
    }
    if (balance(kOmega0) == 0.0) {
        lo = hi = kOmega0;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        (balance(mid) > 0.0 ? lo : hi) = mid;
    }
    const double omega = 0.5 * (lo + hi);
    SteadyState out;
    out.freq_hz = omega / kTwoPi;
    out.diesel_w = diesel_command(omega, s.diesel);
    out.battery_w = battery_ss(omega);
    for (const FinalUnit& fu : units) {
        out.pv_w.push_back(pv_output(fu, omega));
    }
    out.load_w = p_load;
    return out;
}

} // namespace pvvsg

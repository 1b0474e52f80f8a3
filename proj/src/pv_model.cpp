#include "pvvsg/pv_model.hpp"

#include "pvvsg/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pvvsg {

namespace {

constexpr double kBoltzmann = 1.380649e-23;
constexpr double kElectronCharge = 1.602176634e-19;
constexpr double kZeroCelsius = 273.15;
constexpr int kMaxIterations = 100;
constexpr double kGolden = 0.6180339887498949;

// f(I) = Iph - I0 (exp((V + Rs I)/Vt) - 1) - (V + Rs I)/Rsh - I, strictly decreasing in I.
double diode_equation(double v, double i, const DiodeTerms& t, const PvArrayParams& p) {
    const double vd = v + p.rs * i;
    return t.iph - t.i0 * std::expm1(vd / t.vt) - vd / p.rsh - i;
}

double diode_equation_slope(double v, double i, const DiodeTerms& t, const PvArrayParams& p) {
    const double vd = v + p.rs * i;
    return -t.i0 * std::exp(vd / t.vt) * p.rs / t.vt - p.rs / p.rsh - 1.0;
}

double module_current(double v_mod, const DiodeTerms& t, const PvArrayParams& p) {
    if (t.iph <= 0.0) {
        return 0.0;
    }
    if (diode_equation(v_mod, 0.0, t, p) <= 0.0) {
        return 0.0; // beyond open circuit
    }
    double lo = 0.0;
    double hi = t.iph;
    double i = t.iph;
    double f = diode_equation(v_mod, i, t, p);
    const double tol = 1e-12 * t.iph;
    for (int it = 0; it < kMaxIterations; ++it) {
        if (f > 0.0) {
            lo = i;
        } else {
            hi = i;
        }
        double next = i - f / diode_equation_slope(v_mod, i, t, p);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - i);
        i = next;
        f = diode_equation(v_mod, i, t, p);
        if (std::abs(f) <= tol || step <= 1e-15 * t.iph) {
            return i;
        }
    }
    throw SolverError("pv_current: implicit diode equation did not converge", f / t.iph);
}

} // namespace

void validate(const PvArrayParams& p) {
    if (!(p.rs > 0.0) || !(p.rsh > 0.0)) {
        throw DomainError("PvArrayParams: Rs and Rsh must be positive");
    }
    if (p.ns < 1 || p.np < 1) {
        throw DomainError("PvArrayParams: Ns and Np must be >= 1");
    }
    if (!(p.isc_stc > 0.0) || !(p.voc_stc > 0.0)) {
        throw DomainError("PvArrayParams: Isc and Voc must be positive");
    }
    if (!(p.a_diode > 0.0) || !(p.cells > 0.0) || !(p.s_stc > 0.0)) {
        throw DomainError("PvArrayParams: ideality, cell count and S_stc must be positive");
    }
}

PvArrayParams preset_table_a2() { return PvArrayParams{}; }

PvArrayParams preset_grid15kw() {
    PvArrayParams p;
    p.np = 10;
    return p;
}

PvArrayParams preset_by_name(std::string_view name) {
    if (name == "tableA2") {
        return preset_table_a2();
    }
    if (name == "grid15kW") {
        return preset_grid15kw();
    }
    throw DomainError("unknown PV array preset '" + std::string(name) + "'");
}

DiodeTerms diode_terms(double s, double temp, const PvArrayParams& p) {
    if (!(s >= 0.0)) {
        throw DomainError("irradiance must be >= 0");
    }
    DiodeTerms t;
    const double tk = temp + kZeroCelsius;
    t.vt = p.a_diode * p.cells * kBoltzmann * tk / kElectronCharge;
    t.iph = s / p.s_stc * p.isc_stc * (1.0 + p.alpha * (temp - p.t_stc));
    if (s == 0.0) {
        return t;
    }
    // Logarithmic irradiance correction of the open-circuit voltage.
    t.voc = p.voc_stc * (1.0 + p.beta * (temp - p.t_stc)) + t.vt * std::log(s / p.s_stc);
    t.i0 = (t.iph - t.voc / p.rsh) / std::expm1(t.voc / t.vt);
    return t;
}

double open_circuit_voltage(double s, double temp, const PvArrayParams& p) {
    if (!(s > 0.0)) {
        throw DomainError("open_circuit_voltage: irradiance must be > 0");
    }
    return diode_terms(s, temp, p).voc * p.ns;
}

double pv_current(double v_pv, double s, double temp, const PvArrayParams& p) {
    if (!std::isfinite(v_pv) || v_pv < 0.0) {
        throw DomainError("pv_current: voltage must be finite and >= 0");
    }
    const DiodeTerms t = diode_terms(s, temp, p);
    if (s > 0.0 && v_pv > 1.2 * t.voc * p.ns) {
        throw DomainError("pv_current: voltage above 1.2 x open-circuit voltage");
    }
    return p.np * module_current(v_pv / p.ns, t, p);
}

double pv_residual(double v_pv, double i_pv, double s, double temp, const PvArrayParams& p) {
    const DiodeTerms t = diode_terms(s, temp, p);
    const double i_mod = i_pv / p.np;
    const double f = diode_equation(v_pv / p.ns, i_mod, t, p);
    if (i_mod == 0.0) {
        // Clamped branch: the equation is satisfied as an inequality.
        return f <= 0.0 ? 0.0 : (t.iph > 0.0 ? f / t.iph : f);
    }
    return t.iph > 0.0 ? f / t.iph : f;
}

double pv_power(double v_pv, double s, double temp, const PvArrayParams& p) {
    return v_pv * pv_current(v_pv, s, temp, p);
}

OperatingPoint operating_point(double v_pv, double s, double temp, const PvArrayParams& p) {
    OperatingPoint op;
    op.v_pv = v_pv;
    op.i_pv = pv_current(v_pv, s, temp, p);
    op.p_pv = v_pv * op.i_pv;
    op.s = s;
    op.temp = temp;
    return op;
}

MppResult find_mpp(double s, double temp, const PvArrayParams& p) {
    if (!(s > 0.0)) {
        throw DomainError("find_mpp: irradiance must be > 0");
    }
    double a = 0.0;
    double b = open_circuit_voltage(s, temp, p);
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = pv_power(x1, s, temp, p);
    double f2 = pv_power(x2, s, temp, p);
    while (b - a > 1e-7) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = pv_power(x2, s, temp, p);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = pv_power(x1, s, temp, p);
        }
    }
    MppResult r;
    r.v_mpp = 0.5 * (a + b);
    r.p_mpp = pv_power(r.v_mpp, s, temp, p);
    return r;
}

double uphill_voltage_for_power(double p_target, double s, double temp,
                                const PvArrayParams& p, const MppResult& mpp) {
    if (!(p_target >= 0.0) || p_target > mpp.p_mpp) {
        throw SolverError("uphill_voltage_for_power: target not bracketed by [0, p_mpp]",
                          p_target - mpp.p_mpp);
    }
    double lo = 0.0;
    double hi = mpp.v_mpp;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (pv_power(mid, s, temp, p) < p_target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace pvvsg

#include "pvvsg/curves.hpp"

#include "pvvsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvvsg {

std::size_t PiecewiseLinearCurve::segment(double v) const {
    std::size_t i = 0;
    while (i < breakpoints.size() && v >= breakpoints[i]) {
        ++i;
    }
    return i;
}

double PiecewiseLinearCurve::eval(double v) const {
    if (!(v >= 0.0)) {
        throw DomainError("PiecewiseLinearCurve::eval: voltage must be >= 0");
    }
    const std::size_t i = segment(v);
    return slopes[i] * v + intercepts[i];
}

double PiecewiseLinearCurve::segment_begin(std::size_t i) const {
    return i == 0 ? 0.0 : breakpoints[i - 1];
}

double PiecewiseLinearCurve::segment_end(std::size_t i) const {
    return i < breakpoints.size() ? breakpoints[i] : std::numeric_limits<double>::infinity();
}

double discontinuity(const PiecewiseLinearCurve& c, std::size_t i) {
    const double v = c.breakpoints[i];
    const double left = c.slopes[i] * v + c.intercepts[i];
    const double right = c.slopes[i + 1] * v + c.intercepts[i + 1];
    return std::abs(right - left) / std::abs(left);
}

void validate(const PiecewiseLinearCurve& c, double max_jump) {
    if (!(c.breakpoints[0] > 0.0)) {
        throw DomainError("curve: first breakpoint must be > 0");
    }
    for (std::size_t i = 1; i < c.breakpoints.size(); ++i) {
        if (!(c.breakpoints[i] > c.breakpoints[i - 1])) {
            throw DomainError("curve: breakpoints must be strictly ascending");
        }
    }
    if (c.intercepts[0] != 0.0) {
        throw DomainError("curve: first segment must pass through the origin");
    }
    for (std::size_t i = 0; i < c.breakpoints.size(); ++i) {
        if (!(discontinuity(c, i) <= max_jump)) {
            throw DomainError("curve: discontinuity at breakpoint " + std::to_string(i + 1) +
                              " exceeds tolerance");
        }
    }
}

PiecewiseLinearCurve table_a3_deloaded() {
    return {{195.0, 204.8, 208.0},
            {38.6888, 2459.477551, 12688.5, 120668.0},
            {0.0, -472053.8024, -2566957.6, -25026693.6}};
}

PiecewiseLinearCurve table_a3_max_power() {
    return {{256.4229, 269.0229, 273.3229},
            {36.77674654, 2391.15873, 11803.25581, 75417.5},
            {0.0, -603717.4559, -3135787.107, -20523016.81}};
}

PiecewiseLinearCurve scale_power(const PiecewiseLinearCurve& curve, double factor) {
    PiecewiseLinearCurve out = curve;
    for (std::size_t i = 0; i < out.slopes.size(); ++i) {
        out.slopes[i] *= factor;
        out.intercepts[i] *= factor;
    }
    return out;
}

std::vector<double> default_irradiance_grid() {
    std::vector<double> grid;
    for (int s = 100; s <= 1000; s += 10) {
        grid.push_back(s);
    }
    return grid;
}

std::vector<LocusPoint> deloaded_locus(const PvArrayParams& params, double d,
                                       std::span<const double> s_grid, double temp) {
    if (!(d > 0.0 && d < 1.0)) {
        throw DomainError("reserve ratio d must lie in (0, 1)");
    }
    std::vector<LocusPoint> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        const MppResult mpp = find_mpp(s, temp, params);
        const double p = (1.0 - d) * mpp.p_mpp;
        out.push_back({uphill_voltage_for_power(p, s, temp, params, mpp), p});
    }
    return out;
}

std::vector<LocusPoint> max_power_locus(const PvArrayParams& params,
                                        std::span<const double> s_grid, double temp) {
    std::vector<LocusPoint> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        const MppResult mpp = find_mpp(s, temp, params);
        out.push_back({mpp.v_mpp, mpp.p_mpp});
    }
    return out;
}

namespace {

// Solves the 4x4 normal equations in place; false when singular.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b,
            std::array<double, 4>& x) {
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][c]) < 1e-12) {
            return false;
        }
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < 4; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < 4; ++k) {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double acc = b[r];
        for (int k = r + 1; k < 4; ++k) {
            acc -= a[r][k] * x[k];
        }
        x[r] = acc / a[r][r];
    }
    return true;
}

struct HingeFit {
    std::array<double, 4> coef{};
    double sse = std::numeric_limits<double>::infinity();
};

// Basis v, (v-b1)+, (v-b2)+, (v-b3)+ with weights 1/p.
HingeFit hinge_fit(std::span<const LocusPoint> locus, const std::array<double, 3>& bp) {
    std::array<std::array<double, 4>, 4> ata{};
    std::array<double, 4> atb{};
    for (const LocusPoint& pt : locus) {
        const double w = 1.0 / pt.p;
        const std::array<double, 4> row{pt.v * w, std::max(0.0, pt.v - bp[0]) * w,
                                        std::max(0.0, pt.v - bp[1]) * w,
                                        std::max(0.0, pt.v - bp[2]) * w};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * pt.p * w;
        }
    }
    HingeFit fit;
    if (!solve4(ata, atb, fit.coef)) {
        return fit;
    }
    double sse = 0.0;
    for (const LocusPoint& pt : locus) {
        double model = fit.coef[0] * pt.v;
        for (int j = 0; j < 3; ++j) {
            model += fit.coef[j + 1] * std::max(0.0, pt.v - bp[j]);
        }
        const double r = (model - pt.p) / pt.p;
        sse += r * r;
    }
    fit.sse = sse;
    return fit;
}

PiecewiseLinearCurve hinge_to_curve(const HingeFit& fit, const std::array<double, 3>& bp) {
    PiecewiseLinearCurve c;
    c.breakpoints = bp;
    c.slopes[0] = fit.coef[0];
    c.intercepts[0] = 0.0;
    for (int j = 0; j < 3; ++j) {
        c.slopes[j + 1] = c.slopes[j] + fit.coef[j + 1];
        c.intercepts[j + 1] = c.intercepts[j] - fit.coef[j + 1] * bp[j];
    }
    return c;
}

} // namespace

PiecewiseLinearCurve fit_locus(std::span<const LocusPoint> locus, double candidate_step) {
    if (locus.size() < 5) {
        throw DomainError("fit_locus: need at least 5 locus points");
    }
    if (!(candidate_step > 0.0)) {
        throw DomainError("fit_locus: candidate step must be > 0");
    }
    double v_lo = locus.front().v;
    double v_hi = locus.front().v;
    for (const LocusPoint& pt : locus) {
        if (!(pt.p > 0.0)) {
            throw DomainError("fit_locus: locus powers must be > 0");
        }
        v_lo = std::min(v_lo, pt.v);
        v_hi = std::max(v_hi, pt.v);
    }
    std::vector<double> cand;
    for (double v = std::ceil(v_lo / candidate_step) * candidate_step; v < v_hi; v += candidate_step) {
        cand.push_back(v);
    }
    if (cand.size() < 3) {
        throw DomainError("fit_locus: locus spans fewer than three candidate breakpoints");
    }

    HingeFit best;
    std::array<double, 3> best_bp{};
    for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
            for (std::size_t k = j + 1; k < cand.size(); ++k) {
                const std::array<double, 3> bp{cand[i], cand[j], cand[k]};
                const HingeFit fit = hinge_fit(locus, bp);
                if (!(fit.sse < best.sse)) {
                    continue;
                }
                const PiecewiseLinearCurve c = hinge_to_curve(fit, bp);
                if (!std::all_of(c.slopes.begin(), c.slopes.end(), [](double s) { return s > 0.0; })) {
                    continue;
                }
                best = fit;
                best_bp = bp;
            }
        }
    }
    if (!std::isfinite(best.sse)) {
        throw SolverError("fit_locus: no admissible breakpoint combination", 0.0);
    }
    return hinge_to_curve(best, best_bp);
}

PiecewiseLinearCurve fit_deloaded_curve(const PvArrayParams& params, double d,
                                        std::span<const double> s_grid, double temp) {
    const auto locus = deloaded_locus(params, d, s_grid, temp);
    return fit_locus(locus);
}

PiecewiseLinearCurve fit_pmax_curve(const PvArrayParams& params,
                                    std::span<const double> s_grid, double temp) {
    const auto locus = max_power_locus(params, s_grid, temp);
    return fit_locus(locus);
}

std::optional<double> ray_intersection(const PiecewiseLinearCurve& curve, double k) {
    std::optional<double> best;
    for (std::size_t i = 1; i < curve.slopes.size(); ++i) {
        const double denom = curve.slopes[i] - k;
        if (denom == 0.0) {
            continue; // parallel to the ray
        }
        const double v = -curve.intercepts[i] / denom;
        if (v >= curve.segment_begin(i) && v < curve.segment_end(i)) {
            if (!best || v > *best) {
                best = v;
            }
        }
    }
    return best;
}

double estimate_vmpp(double v_pv, double p_pv, const PiecewiseLinearCurve& pmax_curve) {
    if (!(v_pv > 0.0) || !(p_pv > 0.0)) {
        throw DomainError("estimate_vmpp: voltage and power must be > 0");
    }
    const auto v = ray_intersection(pmax_curve, p_pv / v_pv);
    if (!v) {
        throw EstimationError("estimate_vmpp: no segment intersection inside its range");
    }
    return *v;
}

} // namespace pvvsg

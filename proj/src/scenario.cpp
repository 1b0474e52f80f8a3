#include "pvvsg/scenario.hpp"

#include "pvvsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvvsg {

std::string to_string(CurveSource source) {
    switch (source) {
    case CurveSource::fit:
        return "fit";
    case CurveSource::table_a3:
        return "table_a3";
    case CurveSource::explicit_coefficients:
        return "explicit";
    }
    return "unknown";
}

CurveSource parse_curve_source(std::string_view text) {
    if (text == "fit") {
        return CurveSource::fit;
    }
    if (text == "table_a3") {
        return CurveSource::table_a3;
    }
    if (text == "explicit") {
        return CurveSource::explicit_coefficients;
    }
    throw ConfigError("unknown curve source '" + std::string(text) + "'", 0);
}

void validate(const Scenario& s) {
    auto fail = [](const std::string& what) { throw ConfigError(what, 0); };
    if (!(s.duration > 0.0)) {
        fail("duration must be > 0");
    }
    if (!(s.dt_grid > 0.0) || !(s.dt_control > 0.0) || !(s.output_dt > 0.0)) {
        fail("time steps must be > 0");
    }
    const double ratio = s.dt_control / s.dt_grid;
    if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-9) {
        fail("dt_control must be an integer multiple of dt_grid");
    }
    const double out_ratio = s.output_dt / s.dt_grid;
    if (out_ratio < 1.0 - 1e-9 || std::abs(out_ratio - std::round(out_ratio)) > 1e-9) {
        fail("output_dt must be an integer multiple of dt_grid");
    }
    if (!(s.steady_window > 0.0)) {
        fail("steady_window must be > 0");
    }
    if (!(s.irradiance0 >= 0.0)) {
        fail("irradiance0 must be >= 0");
    }
    if (!(s.d_load >= 0.0)) {
        fail("load damping must be >= 0");
    }
    try {
        validate(s.diesel);
        validate(s.battery);
        for (const PvUnitConfig& u : s.pv) {
            validate(u.array);
            if (!(u.reserve > 0.0 && u.reserve < 1.0)) {
                fail("pv reserve must lie in (0, 1)");
            }
            if (u.deloaded_source == CurveSource::explicit_coefficients) {
                validate(u.deloaded_curve);
            }
            if (u.pmax_source == CurveSource::explicit_coefficients) {
                validate(u.pmax_curve);
            }
        }
    } catch (const DomainError& e) {
        fail(e.what());
    }
    for (std::size_t i = 1; i < s.loads.size(); ++i) {
        if (s.loads[i].time < s.loads[i - 1].time) {
            fail("load events must be time-ordered");
        }
    }
    for (std::size_t i = 1; i < s.irradiance.size(); ++i) {
        if (s.irradiance[i].time < s.irradiance[i - 1].time) {
            fail("irradiance events must be time-ordered");
        }
    }
    for (const IrradianceEvent& e : s.irradiance) {
        if (e.end && !(*e.end > e.time)) {
            fail("irradiance ramp end must follow its start");
        }
        if (e.kind != IrradianceKind::ramp && !(e.value >= 0.0)) {
            fail("irradiance values must be >= 0");
        }
    }
}

IrradianceProfile::IrradianceProfile(double initial, const std::vector<IrradianceEvent>& events) {
    const double inf = std::numeric_limits<double>::infinity();
    pieces_.push_back({0.0, initial, 0.0, inf});
    for (std::size_t i = 0; i < events.size(); ++i) {
        const IrradianceEvent& e = events[i];
        const Piece& prev = pieces_.back();
        const double here =
            std::max(0.0, prev.value + prev.rate * (std::min(e.time, prev.stop) - prev.start));
        switch (e.kind) {
        case IrradianceKind::step:
            pieces_.push_back({e.time, e.value, 0.0, inf});
            break;
        case IrradianceKind::ramp:
            pieces_.push_back({e.time, here, e.value, e.end.value_or(inf)});
            break;
        case IrradianceKind::sample: {
            double rate = 0.0;
            if (i + 1 < events.size() && events[i + 1].kind == IrradianceKind::sample &&
                events[i + 1].time > e.time) {
                rate = (events[i + 1].value - e.value) / (events[i + 1].time - e.time);
            }
            pieces_.push_back({e.time, e.value, rate, inf});
            break;
        }
        }
    }
}

double IrradianceProfile::at(double t) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double x, const Piece& p) { return x < p.start; });
    const Piece& p = it == pieces_.begin() ? pieces_.front() : *std::prev(it);
    return std::max(0.0, p.value + p.rate * (std::min(std::max(t, p.start), p.stop) - p.start));
}

double IrradianceProfile::final_value() const {
    const Piece& p = pieces_.back();
    if (p.rate == 0.0) {
        return p.value;
    }
    if (!std::isfinite(p.stop)) {
        throw DomainError("irradiance profile never settles");
    }
    return std::max(0.0, p.value + p.rate * (p.stop - p.start));
}

bool IrradianceProfile::constant_after(double t) const {
    const Piece& p = pieces_.back();
    if (t < p.start) {
        return false;
    }
    return p.rate == 0.0 || t >= p.stop;
}

double load_at(const Scenario& s, double p_load0, double t) {
    double p = p_load0;
    for (const LoadStep& l : s.loads) {
        if (t >= l.time) {
            p += l.delta_w;
        }
    }
    return p;
}

double last_event_time(const Scenario& s) {
    double t = 0.0;
    for (const LoadStep& l : s.loads) {
        t = std::max(t, l.time);
    }
    for (const IrradianceEvent& e : s.irradiance) {
        t = std::max(t, e.end.value_or(e.time));
    }
    return t;
}

namespace {

PvUnitConfig grid_unit(int np) {
    PvUnitConfig u;
    u.array = preset_grid15kw();
    u.array.np = np;
    u.preset = "grid15kW";
    return u;
}

Scenario base_case(std::string name, double duration, double diesel_p_ref, int np) {
    Scenario s;
    s.name = std::move(name);
    s.duration = duration;
    s.diesel.p_ref = diesel_p_ref;
    s.pv.assign(3, grid_unit(np));
    return s;
}

// Substitute for the unpublished measured traces: piecewise-linear irradiance
// samples and a sequence of load steps over 160 s.
void add_case5_profile(Scenario& s) {
    const double samples[][2] = {{0, 1000},  {14, 1000}, {22, 975},  {35, 960},
                                 {44, 985},  {58, 940},  {70, 955},  {83, 925},
                                 {96, 950},  {108, 980}, {121, 965}, {133, 995},
                                 {147, 970}, {160, 980}};
    for (const auto& row : samples) {
        s.irradiance.push_back({IrradianceKind::sample, row[0], row[1], std::nullopt});
    }
    const double steps[][2] = {{6, -3e3},   {13, -2e3},  {19, 1.5e3}, {27, -2.5e3},
                               {34, 3e3},   {41, 2e3},   {48, -4e3},  {56, 1.5e3},
                               {63, -2e3},  {71, 3.5e3}, {79, -1.5e3}, {87, -3e3},
                               {95, 2.5e3}, {103, -2e3}, {111, 4e3},  {119, -3.5e3},
                               {127, 1.5e3}, {135, -2.5e3}, {143, 3e3}, {152, -2e3}};
    for (const auto& row : steps) {
        s.loads.push_back({row[0], row[1]});
    }
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"case1", "case2", "case3", "case4",
                                                "case5", "pen30", "pen50", "pen70"};
    return names;
}

Scenario preset_scenario(std::string_view name) {
    if (name == "case1") {
        Scenario s = base_case("case1", 60.0, 31e3, 10);
        s.loads.push_back({30.0, 10e3});
        return s;
    }
    if (name == "case2") {
        Scenario s = base_case("case2", 60.0, 31e3, 10);
        s.loads.push_back({30.0, -10e3});
        return s;
    }
    if (name == "case3") {
        Scenario s = base_case("case3", 60.0, 31e3, 10);
        s.irradiance.push_back({IrradianceKind::ramp, 30.0, -5.0, std::nullopt});
        s.loads.push_back({45.0, 8e3});
        return s;
    }
    if (name == "case4") {
        Scenario s = base_case("case4", 60.0, 31e3, 10);
        s.irradiance0 = 850.0;
        s.irradiance.push_back({IrradianceKind::ramp, 30.0, 5.0, std::nullopt});
        s.loads.push_back({45.0, -8e3});
        return s;
    }
    if (name == "case5") {
        Scenario s = base_case("case5", 160.0, 31e3, 10);
        add_case5_profile(s);
        return s;
    }
    if (name == "pen30" || name == "pen50" || name == "pen70") {
        const bool p30 = name == "pen30";
        const bool p50 = name == "pen50";
        Scenario s = base_case(std::string(name), 80.0, p30 ? 45.4e3 : (p50 ? 31e3 : 16.6e3),
                               p30 ? 6 : (p50 ? 10 : 14));
        s.loads.push_back({40.0, 10e3});
        return s;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'", 0);
}

} // namespace pvvsg

#include "pvvsg/config.hpp"

#include "pvvsg/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace pvvsg {

namespace {

template <class T>
struct Field {
    const char* key;
    std::function<double&(T&)> ref;
};

const std::vector<Field<Scenario>>& sim_fields() {
    static const std::vector<Field<Scenario>> f{
        {"duration", [](Scenario& s) -> double& { return s.duration; }},
        {"dt_grid", [](Scenario& s) -> double& { return s.dt_grid; }},
        {"dt_control", [](Scenario& s) -> double& { return s.dt_control; }},
        {"output_dt", [](Scenario& s) -> double& { return s.output_dt; }},
        {"steady_window", [](Scenario& s) -> double& { return s.steady_window; }},
    };
    return f;
}

const std::vector<Field<DieselParams>>& diesel_fields() {
    static const std::vector<Field<DieselParams>> f{
        {"p_rated", [](DieselParams& p) -> double& { return p.p_rated; }},
        {"p_ref", [](DieselParams& p) -> double& { return p.p_ref; }},
        {"r", [](DieselParams& p) -> double& { return p.r; }},
        {"t_sm", [](DieselParams& p) -> double& { return p.t_sm; }},
        {"t_d", [](DieselParams& p) -> double& { return p.t_d; }},
        {"h_d", [](DieselParams& p) -> double& { return p.h_d; }},
        {"p_inertia", [](DieselParams& p) -> double& { return p.p_inertia; }},
    };
    return f;
}

const std::vector<Field<BatteryVsgParams>>& battery_fields() {
    static const std::vector<Field<BatteryVsgParams>> f{
        {"p_rated", [](BatteryVsgParams& p) -> double& { return p.p_rated; }},
        {"p_ref", [](BatteryVsgParams& p) -> double& { return p.p_ref; }},
        {"dp_b", [](BatteryVsgParams& p) -> double& { return p.dp_b; }},
        {"j_b", [](BatteryVsgParams& p) -> double& { return p.j_b; }},
        {"d_b", [](BatteryVsgParams& p) -> double& { return p.d_b; }},
    };
    return f;
}

const std::vector<Field<PvUnitConfig>>& unit_fields() {
    using U = PvUnitConfig;
    static const std::vector<Field<U>> f{
        {"voc_stc", [](U& u) -> double& { return u.array.voc_stc; }},
        {"isc_stc", [](U& u) -> double& { return u.array.isc_stc; }},
        {"alpha", [](U& u) -> double& { return u.array.alpha; }},
        {"beta", [](U& u) -> double& { return u.array.beta; }},
        {"a_diode", [](U& u) -> double& { return u.array.a_diode; }},
        {"cells", [](U& u) -> double& { return u.array.cells; }},
        {"rs", [](U& u) -> double& { return u.array.rs; }},
        {"rsh", [](U& u) -> double& { return u.array.rsh; }},
        {"s_stc", [](U& u) -> double& { return u.array.s_stc; }},
        {"t_stc", [](U& u) -> double& { return u.array.t_stc; }},
        {"temp", [](U& u) -> double& { return u.temp; }},
        {"reserve", [](U& u) -> double& { return u.reserve; }},
        {"p_base", [](U& u) -> double& { return u.p_base; }},
        {"k1", [](U& u) -> double& { return u.control.k1; }},
        {"dv_max", [](U& u) -> double& { return u.control.dv_max; }},
        {"v_min", [](U& u) -> double& { return u.control.v_min; }},
        {"pll_tau", [](U& u) -> double& { return u.control.pll_tau; }},
        {"j", [](U& u) -> double& { return u.control.vsg.j; }},
        {"d", [](U& u) -> double& { return u.control.vsg.d; }},
        {"ds", [](U& u) -> double& { return u.control.vsg.ds; }},
        {"dp", [](U& u) -> double& { return u.control.vsg.dp; }},
        {"a", [](U& u) -> double& { return u.control.vsg.a; }},
        {"prc_j", [](U& u) -> double& { return u.control.prc_vsg.j; }},
        {"prc_dp", [](U& u) -> double& { return u.control.prc_vsg.dp; }},
        {"prc_tau", [](U& u) -> double& { return u.control.prc_vsg.tau; }},
    };
    return f;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, int line) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (text.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
        throw ConfigError("expected a number, got '" + std::string(text) + "'", line);
    }
    return v;
}

int parse_int(std::string_view text, int line) {
    const double v = parse_number(text, line);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ConfigError("expected an integer, got '" + std::string(trim(text)) + "'", line);
    }
    return static_cast<int>(v);
}

std::vector<double> parse_list(std::string_view text, std::size_t min_n, std::size_t max_n,
                               int line) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        out.push_back(parse_number(text.substr(pos, comma - pos), line));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    if (out.size() < min_n || out.size() > max_n) {
        throw ConfigError("expected " + std::to_string(min_n) +
                              (max_n > min_n ? "-" + std::to_string(max_n) : std::string()) +
                              " comma-separated numbers",
                          line);
    }
    return out;
}

template <std::size_t N>
std::array<double, N> parse_array(std::string_view text, int line) {
    const auto v = parse_list(text, N, N, line);
    std::array<double, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

template <class T>
bool set_field(const std::vector<Field<T>>& fields, T& target, std::string_view key,
               std::string_view value, int line) {
    for (const auto& f : fields) {
        if (key == f.key) {
            f.ref(target) = parse_number(value, line);
            return true;
        }
    }
    return false;
}

template <class F>
auto with_line(F&& f, int line) {
    try {
        return f();
    } catch (const ConfigError& e) {
        if (e.line() > 0) {
            throw;
        }
        throw ConfigError(e.what(), line);
    } catch (const DomainError& e) {
        throw ConfigError(e.what(), line);
    }
}

class Parser {
public:
    Parser(Scenario start, bool have_preset, bool keep_events = false)
        : s_(std::move(start)), have_preset_(have_preset), seen_events_(keep_events) {}

    void feed(std::string_view text, bool require_sections) {
        int line = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto nl = text.find('\n', pos);
            std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++line;
            if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
                raw = raw.substr(0, hash);
            }
            const std::string_view l = trim(raw);
            if (l.empty()) {
                continue;
            }
            if (l.front() == '[') {
                if (l.back() != ']') {
                    throw ConfigError("malformed section header", line);
                }
                header(trim(l.substr(1, l.size() - 2)), line);
                continue;
            }
            const auto eq = l.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError("expected key = value", line);
            }
            key(trim(l.substr(0, eq)), trim(l.substr(eq + 1)), line);
        }
        if (require_sections && !have_preset_) {
            if (!seen_sim_) {
                throw ConfigError("missing required section [sim]", line);
            }
            if (!seen_events_) {
                throw ConfigError("missing required section [events]", line);
            }
        }
    }

    void set_section(std::string section) { section_ = std::move(section); }
    Scenario& scenario() { return s_; }

    void key(std::string_view k, std::string_view v, int line) {
        if (section_.empty() || section_ == "sim") {
            if (k == "preset") {
                s_ = with_line([&] { return preset_scenario(std::string(v)); }, line);
                have_preset_ = true;
                return;
            }
            if (section_.empty()) {
                throw ConfigError("key '" + std::string(k) + "' outside a section", line);
            }
            if (k == "name") {
                s_.name = std::string(v);
                return;
            }
            if (k == "mode") {
                s_.mode = with_line([&] { return parse_mode(v); }, line);
                return;
            }
            if (set_field(sim_fields(), s_, k, v, line)) {
                return;
            }
        } else if (section_ == "grid") {
            if (k == "d_load") {
                s_.d_load = parse_number(v, line);
                return;
            }
            if (k == "p_load0") {
                if (v == "auto") {
                    s_.p_load0.reset();
                } else {
                    s_.p_load0 = parse_number(v, line);
                }
                return;
            }
        } else if (section_ == "diesel") {
            if (set_field(diesel_fields(), s_.diesel, k, v, line)) {
                return;
            }
        } else if (section_ == "battery") {
            if (set_field(battery_fields(), s_.battery, k, v, line)) {
                return;
            }
        } else if (section_ == "pv") {
            if (k == "units") {
                const int n = parse_int(v, line);
                if (n < 0 || n > 64) {
                    throw ConfigError("units must lie in [0, 64]", line);
                }
                s_.pv.resize(static_cast<std::size_t>(n),
                             s_.pv.empty() ? PvUnitConfig{} : s_.pv.back());
                return;
            }
            PvUnitConfig probe = s_.pv.empty() ? PvUnitConfig{} : s_.pv.front();
            if (unit_key(probe, k, v, line)) {
                for (PvUnitConfig& u : s_.pv) {
                    unit_key(u, k, v, line);
                }
                return;
            }
        } else if (section_.rfind("pv.", 0) == 0) {
            const int idx = parse_int(std::string_view(section_).substr(3), line);
            if (idx < 1 || static_cast<std::size_t>(idx) > s_.pv.size()) {
                throw ConfigError("no PV unit " + std::to_string(idx) + " (set [pv] units first)",
                                  line);
            }
            if (unit_key(s_.pv[static_cast<std::size_t>(idx - 1)], k, v, line)) {
                return;
            }
        } else if (section_ == "events") {
            if (event_key(k, v, line)) {
                return;
            }
        }
        throw ConfigError("unknown key '" + std::string(k) + "' in [" + section_ + "]", line);
    }

private:
    void header(std::string_view name, int line) {
        static const char* known[] = {"sim", "grid", "diesel", "battery", "pv", "events"};
        bool ok = std::find(std::begin(known), std::end(known), name) != std::end(known);
        if (!ok && name.rfind("pv.", 0) == 0) {
            parse_int(name.substr(3), line);
            ok = true;
        }
        if (!ok) {
            throw ConfigError("unknown section [" + std::string(name) + "]", line);
        }
        section_ = std::string(name);
        if (name == "sim") {
            seen_sim_ = true;
        }
        if (name == "events" && !seen_events_) {
            seen_events_ = true;
            s_.loads.clear();
            s_.irradiance.clear();
        }
    }

    bool unit_key(PvUnitConfig& u, std::string_view k, std::string_view v, int line) {
        if (k == "array") {
            u.array = with_line([&] { return preset_by_name(v); }, line);
            u.preset = std::string(v);
            return true;
        }
        if (k == "ns") {
            u.array.ns = parse_int(v, line);
            return true;
        }
        if (k == "np") {
            u.array.np = parse_int(v, line);
            return true;
        }
        if (k == "deloaded_curve") {
            u.deloaded_source = with_line([&] { return parse_curve_source(v); }, line);
            return true;
        }
        if (k == "pmax_curve") {
            u.pmax_source = with_line([&] { return parse_curve_source(v); }, line);
            return true;
        }
        auto curve_key = [&](const char* prefix, PiecewiseLinearCurve& c) {
            const std::string p(prefix);
            if (k == p + "_breakpoints") {
                c.breakpoints = parse_array<3>(v, line);
                return true;
            }
            if (k == p + "_slopes") {
                c.slopes = parse_array<4>(v, line);
                return true;
            }
            if (k == p + "_intercepts") {
                c.intercepts = parse_array<4>(v, line);
                return true;
            }
            return false;
        };
        if (curve_key("deloaded", u.deloaded_curve) || curve_key("pmax", u.pmax_curve)) {
            return true;
        }
        return set_field(unit_fields(), u, k, v, line);
    }

    bool event_key(std::string_view k, std::string_view v, int line) {
        if (k == "irradiance0") {
            s_.irradiance0 = parse_number(v, line);
            return true;
        }
        if (k == "load_step") {
            const auto x = parse_list(v, 2, 2, line);
            s_.loads.push_back({x[0], x[1]});
            return true;
        }
        if (k == "irradiance" || k == "irradiance_sample") {
            const auto x = parse_list(v, 2, 2, line);
            s_.irradiance.push_back({k == "irradiance" ? IrradianceKind::step
                                                       : IrradianceKind::sample,
                                     x[0], x[1], std::nullopt});
            return true;
        }
        if (k == "irradiance_ramp") {
            const auto x = parse_list(v, 2, 3, line);
            s_.irradiance.push_back({IrradianceKind::ramp, x[0], x[1],
                                     x.size() == 3 ? std::optional<double>(x[2]) : std::nullopt});
            return true;
        }
        return false;
    }

    Scenario s_;
    bool have_preset_;
    std::string section_;
    bool seen_sim_ = false;
    bool seen_events_;
};

template <std::size_t N>
std::string join(const std::array<double, N>& a) {
    std::string out;
    for (std::size_t i = 0; i < N; ++i) {
        out += (i ? ", " : "") + format_double(a[i]);
    }
    return out;
}

// Line after the longest prefix that still validates: the first line from which
// the scenario stays invalid.
int blame_line(std::string_view text) {
    std::vector<std::size_t> ends;
    for (std::size_t pos = text.find('\n'); pos != std::string_view::npos;
         pos = text.find('\n', pos + 1)) {
        ends.push_back(pos + 1);
    }
    if (ends.empty() || ends.back() != text.size()) {
        ends.push_back(text.size());
    }
    for (std::size_t n = ends.size(); n-- > 0;) {
        try {
            Parser p(Scenario{}, false);
            p.feed(text.substr(0, n == 0 ? 0 : ends[n - 1]), false);
            validate(p.scenario());
            return static_cast<int>(n + 1);
        } catch (const ConfigError&) {
        }
    }
    return 1;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, r.ptr);
}

Scenario parse_config(std::string_view text) {
    Parser p(Scenario{}, false);
    p.feed(text, true);
    Scenario s = p.scenario();
    try {
        validate(s);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what(), blame_line(text));
    }
    return s;
}

void apply_overrides(Scenario& scenario, const std::vector<std::string>& overrides) {
    for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override '" + o + "' is not section.key=value", 0);
        }
        const std::string lhs(trim(std::string_view(o).substr(0, eq)));
        const auto dot = lhs.rfind('.');
        const std::string section = dot == std::string::npos ? "sim" : lhs.substr(0, dot);
        const std::string key = dot == std::string::npos ? lhs : lhs.substr(dot + 1);
        Parser p(scenario, true, true);
        try {
            p.feed("[" + section + "]\n" + key + " = " + o.substr(eq + 1) + "\n", false);
        } catch (const ConfigError& e) {
            throw ConfigError("override '" + o + "': " + e.what(), 0);
        }
        scenario = p.scenario();
    }
    auto by_time = [](const auto& a, const auto& b) { return a.time < b.time; };
    std::stable_sort(scenario.loads.begin(), scenario.loads.end(), by_time);
    std::stable_sort(scenario.irradiance.begin(), scenario.irradiance.end(), by_time);
    try {
        validate(scenario);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid scenario after overrides: ") + e.what(), 0);
    }
}

std::string format_config(const Scenario& s) {
    std::ostringstream o;
    Scenario c = s;
    o << "[sim]\n";
    o << "name = " << s.name << "\n";
    o << "mode = " << to_string(s.mode) << "\n";
    for (const auto& f : sim_fields()) {
        o << f.key << " = " << format_double(f.ref(c)) << "\n";
    }
    o << "\n[grid]\n";
    o << "d_load = " << format_double(s.d_load) << "\n";
    o << "p_load0 = " << (s.p_load0 ? format_double(*s.p_load0) : std::string("auto")) << "\n";
    o << "\n[diesel]\n";
    for (const auto& f : diesel_fields()) {
        o << f.key << " = " << format_double(f.ref(c.diesel)) << "\n";
    }
    o << "\n[battery]\n";
    for (const auto& f : battery_fields()) {
        o << f.key << " = " << format_double(f.ref(c.battery)) << "\n";
    }
    o << "\n[pv]\n";
    o << "units = " << s.pv.size() << "\n";
    for (std::size_t i = 0; i < s.pv.size(); ++i) {
        PvUnitConfig& u = c.pv[i];
        o << "\n[pv." << i + 1 << "]\n";
        o << "array = " << u.preset << "\n";
        o << "ns = " << u.array.ns << "\n";
        o << "np = " << u.array.np << "\n";
        for (const auto& f : unit_fields()) {
            o << f.key << " = " << format_double(f.ref(u)) << "\n";
        }
        o << "deloaded_curve = " << to_string(u.deloaded_source) << "\n";
        if (u.deloaded_source == CurveSource::explicit_coefficients ||
            u.deloaded_curve != PiecewiseLinearCurve{}) {
            o << "deloaded_breakpoints = " << join(u.deloaded_curve.breakpoints) << "\n";
            o << "deloaded_slopes = " << join(u.deloaded_curve.slopes) << "\n";
            o << "deloaded_intercepts = " << join(u.deloaded_curve.intercepts) << "\n";
        }
        o << "pmax_curve = " << to_string(u.pmax_source) << "\n";
        if (u.pmax_source == CurveSource::explicit_coefficients ||
            u.pmax_curve != PiecewiseLinearCurve{}) {
            o << "pmax_breakpoints = " << join(u.pmax_curve.breakpoints) << "\n";
            o << "pmax_slopes = " << join(u.pmax_curve.slopes) << "\n";
            o << "pmax_intercepts = " << join(u.pmax_curve.intercepts) << "\n";
        }
    }
    o << "\n[events]\n";
    o << "irradiance0 = " << format_double(s.irradiance0) << "\n";
    for (const LoadStep& l : s.loads) {
        o << "load_step = " << format_double(l.time) << ", " << format_double(l.delta_w) << "\n";
    }
    for (const IrradianceEvent& e : s.irradiance) {
        switch (e.kind) {
        case IrradianceKind::step:
            o << "irradiance = ";
            break;
        case IrradianceKind::ramp:
            o << "irradiance_ramp = ";
            break;
        case IrradianceKind::sample:
            o << "irradiance_sample = ";
            break;
        }
        o << format_double(e.time) << ", " << format_double(e.value);
        if (e.end) {
            o << ", " << format_double(*e.end);
        }
        o << "\n";
    }
    return o.str();
}

Scenario load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace pvvsg

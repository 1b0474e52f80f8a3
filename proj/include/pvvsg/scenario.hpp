#pragma once

#include "pvvsg/controller.hpp"
#include "pvvsg/curves.hpp"
#include "pvvsg/grid.hpp"
#include "pvvsg/pv_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pvvsg {

enum class CurveSource { fit, table_a3, explicit_coefficients };

std::string to_string(CurveSource source);
CurveSource parse_curve_source(std::string_view text);

struct PvUnitConfig {
    std::string preset = "grid15kW";
    PvArrayParams array = preset_grid15kw();
    double temp = 25.0;
    double reserve = 0.2;
    CurveSource deloaded_source = CurveSource::fit;
    PiecewiseLinearCurve deloaded_curve{};
    CurveSource pmax_source = CurveSource::fit;
    PiecewiseLinearCurve pmax_curve{};
    double p_base = 0.0; // controller power base; 0 selects the STC maximum power
    PvControlParams control;

    bool operator==(const PvUnitConfig&) const = default;
};

struct LoadStep {
    double time = 0.0;
    double delta_w = 0.0;

    bool operator==(const LoadStep&) const = default;
};

enum class IrradianceKind { step, ramp, sample };

struct IrradianceEvent {
    IrradianceKind kind = IrradianceKind::step;
    double time = 0.0;
    double value = 0.0; // W/m^2 for step/sample, W/m^2/s for ramp
    std::optional<double> end;

    bool operator==(const IrradianceEvent&) const = default;
};

struct Scenario {
    std::string name = "custom";
    double duration = 60.0;
    double dt_grid = 1e-3;
    double dt_control = 1e-3;
    double output_dt = 1e-2;
    double steady_window = 5.0;
    ControllerMode mode = ControllerMode::none;
    DieselParams diesel;
    BatteryVsgParams battery;
    double d_load = 1.0;
    std::optional<double> p_load0; // empty: balance the initial injections
    double irradiance0 = 1000.0;
    std::vector<PvUnitConfig> pv;
    std::vector<LoadStep> loads;
    std::vector<IrradianceEvent> irradiance;

    bool operator==(const Scenario&) const = default;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const Scenario& scenario);

/// Irradiance profile built from the event list and the initial value.
class IrradianceProfile {
public:
    IrradianceProfile(double initial, const std::vector<IrradianceEvent>& events);
    double at(double t) const;
    /// Value after every event has played out (used by the steady-state solver).
    double final_value() const;
    bool constant_after(double t) const;

private:
    struct Piece {
        double start;
        double value;
        double rate;
        double stop; // rate applies on [start, stop)
    };
    std::vector<Piece> pieces_;
};

double load_at(const Scenario& scenario, double p_load0, double t);

/// Names accepted by preset_scenario.
const std::vector<std::string>& preset_names();
Scenario preset_scenario(std::string_view name);

/// Time after which no event changes the inputs.
double last_event_time(const Scenario& scenario);

} // namespace pvvsg

#pragma once

#include "pvvsg/scenario.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pvvsg {

/// Sectioned key = value scenario text. Sections: [sim], [grid], [diesel],
/// [battery], [pv] (all units), [pv.N] (unit N, 1-based), [events].
/// `preset = <name>` (top level or [sim]) starts from a shipped preset; later
/// keys override it and the first [events] header replaces its event list.
/// Without a preset, [sim] and [events] are required.
Scenario parse_config(std::string_view text);

/// Applies `section.key=value` overrides in order (e.g. "pv.np=12", "sim.mode=none",
/// "events.load_step=40,5000"). Errors name the offending override.
void apply_overrides(Scenario& scenario, const std::vector<std::string>& overrides);

/// Text that parses back to a field-for-field equal scenario.
std::string format_config(const Scenario& scenario);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

/// Reads a file and parses it; IoError when unreadable.
Scenario load_config_file(const std::string& path);

} // namespace pvvsg

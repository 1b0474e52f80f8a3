#pragma once

#include "pvvsg/sim.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pvvsg {

enum class MetricKind { nadir, peak, steady, final_freq, rmse, max_dev };

std::string to_string(MetricKind k);
double metric_value(const Metrics& m, MetricKind k);

struct ReferenceValue {
    std::string preset;
    ControllerMode mode;
    MetricKind metric;
    double value;
    double tolerance; // <= 0 means reported only
};

/// Published frequency figures used by the batch report.
const std::vector<ReferenceValue>& reference_values();

struct BatchRun {
    std::string preset;
    ControllerMode mode = ControllerMode::none;
    bool ok = false;
    std::string error;
    Metrics metrics;
    double seconds = 0.0;
};

struct BatchReport {
    std::vector<BatchRun> runs;
    double seconds = 0.0;
    std::size_t aborted() const;
};

Metrics scenario_metrics(const Scenario& scenario, const TimeSeries& ts);

/// Runs every preset in every controller mode on at most `workers` threads
/// (0 = hardware concurrency). With an output directory, each run writes
/// `<preset>_<mode>/` plus summary.csv and report.md at the top level.
BatchReport reproduce_all(const std::optional<std::filesystem::path>& out_dir,
                          unsigned workers = 0);

std::string format_report(const BatchReport& report);

} // namespace pvvsg

#include "pvvsg/batch.hpp"
#include "pvvsg/config.hpp"
#include "pvvsg/errors.hpp"
#include "pvvsg/output.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace pvvsg;

namespace {

Scenario load_scenario(const std::string& source) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), source) != names.end()) {
        return preset_scenario(source);
    }
    return load_config_file(source);
}

int run_command(const std::string& source, const std::string& mode, const std::string& out,
                const std::vector<std::string>& overrides, bool compare) {
    Scenario base = load_scenario(source);
    apply_overrides(base, overrides);
    if (!mode.empty()) {
        base.mode = parse_mode(mode);
    }
    std::vector<ControllerMode> modes{base.mode};
    if (compare) {
        modes = {ControllerMode::none, ControllerMode::prc_vsg, ControllerMode::proposed_vsg};
    }
    const fs::path root(out);
    const auto summary = root / "summary.csv";
    reset_summary(summary);
    for (auto m : modes) {
        Scenario sc = base;
        sc.mode = m;
        const TimeSeries ts = run_scenario(sc);
        const Metrics metrics = scenario_metrics(sc, ts);
        emit_outputs(ts, metrics, root / (sc.name + "_" + to_string(m)), sc.name, to_string(m));
        append_summary(summary, summary_row(metrics, sc.name, to_string(m)));
        std::cout << sc.name << " " << to_string(m) << ": nadir " << format_double(metrics.nadir)
                  << " Hz, peak " << format_double(metrics.peak) << " Hz, steady "
                  << format_double(metrics.steady) << " Hz\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PV virtual synchronous generator microgrid simulator"};
    app.require_subcommand(1);

    std::string source;
    std::string mode;
    std::string out = "out";
    std::vector<std::string> overrides;
    bool compare = false;
    auto* run = app.add_subcommand("run", "Simulate one preset or scenario file");
    run->add_option("scenario", source, "Preset name or path to a scenario file")->required();
    run->add_option("--mode", mode, "none | prc_vsg | proposed_vsg");
    run->add_option("--out", out, "Output directory");
    run->add_option("--set", overrides, "Override as section.key=value")->allow_extra_args(false);
    run->add_flag("--compare", compare, "Run all three controller modes");

    std::string batch_out = "out";
    unsigned jobs = 0;
    auto* batch = app.add_subcommand("reproduce-all", "Run every preset in every mode");
    batch->add_option("--out", batch_out, "Output directory");
    batch->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    std::string shown;
    auto* show = app.add_subcommand("config", "Print a preset or scenario file in config form");
    show->add_option("scenario", shown, "Preset name or path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*show) {
            std::cout << format_config(load_scenario(shown));
            return 0;
        }
        if (*run) {
            return run_command(source, mode, out, overrides, compare);
        }
        const BatchReport report = reproduce_all(fs::path(batch_out), jobs);
        std::cout << format_report(report);
        return report.aborted() == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "simulation aborted: " << e.what() << "\n";
        return 2;
    }
}

#include "pvvsg/batch.hpp"

#include "pvvsg/config.hpp"
#include "pvvsg/errors.hpp"
#include "pvvsg/output.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace pvvsg {

std::string to_string(MetricKind k) {
    switch (k) {
    case MetricKind::nadir: return "nadir";
    case MetricKind::peak: return "peak";
    case MetricKind::steady: return "steady";
    case MetricKind::final_freq: return "final";
    case MetricKind::rmse: return "rmse";
    case MetricKind::max_dev: return "max_dev";
    }
    return "?";
}

double metric_value(const Metrics& m, MetricKind k) {
    switch (k) {
    case MetricKind::nadir: return m.nadir;
    case MetricKind::peak: return m.peak;
    case MetricKind::steady: return m.steady;
    case MetricKind::final_freq: return m.final_freq;
    case MetricKind::rmse: return m.rmse;
    case MetricKind::max_dev: return m.max_dev;
    }
    return 0.0;
}

const std::vector<ReferenceValue>& reference_values() {
    using M = ControllerMode;
    using K = MetricKind;
    static const std::vector<ReferenceValue> refs = {
        {"case1", M::none, K::nadir, 49.49, 0.1},
        {"case1", M::prc_vsg, K::nadir, 49.74, 0.1},
        {"case1", M::proposed_vsg, K::nadir, 49.77, 0.1},
        {"case1", M::none, K::steady, 49.75, 0.05},
        {"case1", M::proposed_vsg, K::steady, 49.86, 0.05},
        {"case1", M::prc_vsg, K::steady, 49.86, 0.05},
        {"case2", M::none, K::peak, 50.5, 0.1},
        {"case2", M::prc_vsg, K::peak, 50.26, 0.1},
        {"case2", M::proposed_vsg, K::peak, 50.23, 0.1},
        {"case2", M::none, K::steady, 50.25, 0.05},
        {"case3", M::none, K::nadir, 49.51, 0.1},
        {"case3", M::prc_vsg, K::nadir, 49.74, 0.1},
        {"case3", M::proposed_vsg, K::nadir, 49.76, 0.1},
        {"case3", M::none, K::final_freq, 49.67, 0.05},
        {"case3", M::prc_vsg, K::final_freq, 49.81, 0.05},
        {"case3", M::proposed_vsg, K::final_freq, 49.81, 0.05},
        {"case4", M::none, K::peak, 50.49, 0.1},
        {"case4", M::prc_vsg, K::peak, 50.25, 0.1},
        {"case4", M::proposed_vsg, K::peak, 50.23, 0.1},
        {"case4", M::none, K::final_freq, 50.33, 0.05},
        {"case4", M::prc_vsg, K::final_freq, 50.18, 0.05},
        {"case4", M::proposed_vsg, K::final_freq, 50.18, 0.05},
        {"case5", M::none, K::rmse, 0.1247, 0.0},
        {"case5", M::prc_vsg, K::rmse, 0.0886, 0.0},
        {"case5", M::proposed_vsg, K::rmse, 0.0689, 0.0},
        {"case5", M::none, K::max_dev, 0.23, 0.0},
        {"case5", M::prc_vsg, K::max_dev, 0.16, 0.0},
        {"case5", M::proposed_vsg, K::max_dev, 0.12, 0.0},
        {"pen30", M::none, K::nadir, 49.49, 0.1},
        {"pen50", M::none, K::nadir, 49.49, 0.1},
        {"pen70", M::none, K::nadir, 49.49, 0.1},
        {"pen30", M::proposed_vsg, K::nadir, 49.7, 0.1},
        {"pen50", M::proposed_vsg, K::nadir, 49.77, 0.1},
        {"pen70", M::proposed_vsg, K::nadir, 49.81, 0.1},
        {"pen30", M::none, K::steady, 49.75, 0.05},
        {"pen50", M::none, K::steady, 49.75, 0.05},
        {"pen70", M::none, K::steady, 49.75, 0.05},
        {"pen30", M::proposed_vsg, K::steady, 49.83, 0.05},
        {"pen50", M::proposed_vsg, K::steady, 49.86, 0.05},
        {"pen70", M::proposed_vsg, K::steady, 49.88, 0.05},
    };
    return refs;
}

std::size_t BatchReport::aborted() const {
    return static_cast<std::size_t>(
        std::count_if(runs.begin(), runs.end(), [](const BatchRun& r) { return !r.ok; }));
}

Metrics scenario_metrics(const Scenario& scenario, const TimeSeries& ts) {
    MetricsWindow w;
    w.steady_window = scenario.steady_window;
    return compute_metrics(ts, w);
}

BatchReport reproduce_all(const std::optional<std::filesystem::path>& out_dir, unsigned workers) {
    const auto t0 = std::chrono::steady_clock::now();
    BatchReport report;
    for (const auto& name : preset_names()) {
        for (auto mode : {ControllerMode::none, ControllerMode::prc_vsg,
                          ControllerMode::proposed_vsg}) {
            BatchRun run;
            run.preset = name;
            run.mode = mode;
            report.runs.push_back(run);
        }
    }
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(report.runs.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < report.runs.size(); i = next++) {
            BatchRun& run = report.runs[i];
            const auto start = std::chrono::steady_clock::now();
            try {
                Scenario sc = preset_scenario(run.preset);
                sc.mode = run.mode;
                const TimeSeries ts = run_scenario(sc);
                run.metrics = scenario_metrics(sc, ts);
                if (out_dir) {
                    emit_outputs(ts, run.metrics, *out_dir / (run.preset + "_" + to_string(run.mode)),
                                 run.preset, to_string(run.mode));
                }
                run.ok = true;
            } catch (const std::exception& e) {
                run.error = e.what();
            }
            run.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < workers; ++k) {
        pool.emplace_back(work);
    }
    for (auto& t : pool) {
        t.join();
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (out_dir) {
        const auto summary = *out_dir / "summary.csv";
        reset_summary(summary);
        for (const auto& run : report.runs) {
            if (run.ok) {
                append_summary(summary, summary_row(run.metrics, run.preset, to_string(run.mode)));
            }
        }
        write_text_file(*out_dir / "report.md", format_report(report));
    }
    return report;
}

namespace {

std::string fixed(double v, int digits) {
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(digits);
    o << v;
    return o.str();
}

const BatchRun* find_run(const BatchReport& r, const std::string& preset, ControllerMode mode) {
    for (const auto& run : r.runs) {
        if (run.preset == preset && run.mode == mode) {
            return &run;
        }
    }
    return nullptr;
}

} // namespace

std::string format_report(const BatchReport& report) {
    std::ostringstream o;
    o << "# Reproduction report\n\n";
    o << "| preset | mode | status | nadir Hz | peak Hz | steady Hz | final Hz | rmse Hz | "
         "max dev Hz | seconds |\n";
    o << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& run : report.runs) {
        o << "| " << run.preset << " | " << to_string(run.mode) << " | ";
        if (!run.ok) {
            o << "abort: " << run.error << " | | | | | | | " << fixed(run.seconds, 2) << " |\n";
            continue;
        }
        const Metrics& m = run.metrics;
        o << "ok | " << fixed(m.nadir, 4) << " | " << fixed(m.peak, 4) << " | "
          << fixed(m.steady, 4) << " | " << fixed(m.final_freq, 4) << " | " << fixed(m.rmse, 4)
          << " | " << fixed(m.max_dev, 4) << " | " << fixed(run.seconds, 2) << " |\n";
    }

    o << "\n## Published values\n\n";
    o << "| preset | mode | metric | published | simulated | tolerance | result |\n";
    o << "|---|---|---|---|---|---|---|\n";
    std::size_t pass = 0;
    std::size_t checked = 0;
    for (const auto& ref : reference_values()) {
        const BatchRun* run = find_run(report, ref.preset, ref.mode);
        o << "| " << ref.preset << " | " << to_string(ref.mode) << " | " << to_string(ref.metric)
          << " | " << fixed(ref.value, 4) << " | ";
        if (run == nullptr || !run->ok) {
            o << "- | | abort |\n";
            ++checked;
            continue;
        }
        const double sim = metric_value(run->metrics, ref.metric);
        o << fixed(sim, 4) << " | ";
        if (ref.tolerance <= 0.0) {
            o << "report only | - |\n";
            continue;
        }
        const bool ok = std::abs(sim - ref.value) <= ref.tolerance;
        ++checked;
        pass += ok;
        o << "+-" << fixed(ref.tolerance, 2) << " | " << (ok ? "PASS" : "FAIL") << " |\n";
    }
    o << "\n" << pass << " of " << checked << " published values within tolerance. "
      << report.aborted() << " aborted runs. Wall time " << fixed(report.seconds, 1) << " s.\n";
    return o.str();
}

} // namespace pvvsg

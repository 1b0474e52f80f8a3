#include "pvvsg/output.hpp"

#include "pvvsg/config.hpp"
#include "pvvsg/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pvvsg {

namespace fs = std::filesystem;

std::vector<std::string> trace_header(std::size_t units) {
    std::vector<std::string> h{"time", "freq_hz", "diesel_w", "battery_w"};
    for (const char* kind : {"_w", "_v"}) {
        for (std::size_t i = 0; i < units; ++i) {
            h.push_back("pv" + std::to_string(i + 1) + kind);
        }
    }
    for (std::size_t i = 0; i < units; ++i) {
        h.push_back("reserve" + std::to_string(i + 1));
    }
    h.push_back("load_w");
    return h;
}

std::string format_trace(const TimeSeries& ts) {
    std::string out;
    const auto header = trace_header(ts.units());
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? "," : "") + header[i];
    }
    out += '\n';
    char buf[32];
    auto put = [&](double v, bool comma) {
        if (comma) {
            out += ',';
        }
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, r.ptr);
    };
    for (std::size_t k = 0; k < ts.size(); ++k) {
        put(ts.time[k], false);
        put(ts.freq_hz[k], true);
        put(ts.diesel_w[k], true);
        put(ts.battery_w[k], true);
        for (const auto& c : ts.pv_w) {
            put(c[k], true);
        }
        for (const auto& c : ts.pv_v) {
            put(c[k], true);
        }
        for (const auto& c : ts.reserve) {
            put(c[k], true);
        }
        put(ts.load_w[k], true);
        out += '\n';
    }
    return out;
}

TimeSeries parse_trace(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("trace: missing header");
    }
    std::size_t cols = 1;
    for (char c : line) {
        cols += c == ',';
    }
    if (cols < 5 || (cols - 5) % 3 != 0) {
        throw IoError("trace: unexpected column count");
    }
    const std::size_t units = (cols - 5) / 3;
    std::string expected;
    for (const auto& h : trace_header(units)) {
        expected += (expected.empty() ? "" : ",") + h;
    }
    if (line != expected) {
        throw IoError("trace: header does not match the trace layout");
    }
    TimeSeries ts;
    ts.pv_w.assign(units, {});
    ts.pv_v.assign(units, {});
    ts.reserve.assign(units, {});
    std::vector<double> row(cols);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t c = 0; c < cols; ++c) {
            const auto r = std::from_chars(p, end, row[c]);
            if (r.ec != std::errc() || (c + 1 < cols && (r.ptr == end || *r.ptr != ',')) ||
                (c + 1 == cols && r.ptr != end)) {
                throw IoError("trace: malformed row " + std::to_string(line_no));
            }
            p = r.ptr + 1;
        }
        std::size_t c = 0;
        ts.time.push_back(row[c++]);
        ts.freq_hz.push_back(row[c++]);
        ts.diesel_w.push_back(row[c++]);
        ts.battery_w.push_back(row[c++]);
        for (auto& col : ts.pv_w) {
            col.push_back(row[c++]);
        }
        for (auto& col : ts.pv_v) {
            col.push_back(row[c++]);
        }
        for (auto& col : ts.reserve) {
            col.push_back(row[c++]);
        }
        ts.load_w.push_back(row[c++]);
    }
    return ts;
}

TimeSeries read_trace(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

std::string format_metrics(const Metrics& m, const std::string& scenario,
                           const std::string& mode) {
    std::ostringstream o;
    auto kv = [&](const std::string& k, double v) { o << k << ": " << format_double(v) << "\n"; };
    o << "scenario: " << scenario << "\n";
    o << "mode: " << mode << "\n";
    kv("nadir_hz", m.nadir);
    kv("peak_hz", m.peak);
    kv("steady_hz", m.steady);
    kv("final_hz", m.final_freq);
    kv("rms_hz", m.rms);
    kv("rmse_hz", m.rmse);
    kv("max_dev_hz", m.max_dev);
    auto power = [&](const std::string& name, const PowerStats& p) {
        kv(name + "_peak_w", p.peak);
        kv(name + "_low_w", p.low);
        kv(name + "_steady_w", p.steady);
    };
    power("diesel", m.diesel);
    power("battery", m.battery);
    for (std::size_t i = 0; i < m.pv.size(); ++i) {
        power("pv" + std::to_string(i + 1), m.pv[i]);
    }
    return o.str();
}

std::string summary_header() {
    return "scenario,mode,nadir_hz,peak_hz,steady_hz,final_hz,rms_hz,rmse_hz,max_dev_hz,"
           "diesel_peak_w,diesel_steady_w,battery_peak_w,battery_steady_w,pv1_peak_w,"
           "pv1_steady_w";
}

std::string summary_row(const Metrics& m, const std::string& scenario, const std::string& mode) {
    std::string out = scenario + "," + mode;
    for (double v : {m.nadir, m.peak, m.steady, m.final_freq, m.rms, m.rmse, m.max_dev,
                     m.diesel.peak, m.diesel.steady, m.battery.peak, m.battery.steady}) {
        out += "," + format_double(v);
    }
    if (m.pv.empty()) {
        out += ",,";
    } else {
        out += "," + format_double(m.pv[0].peak) + "," + format_double(m.pv[0].steady);
    }
    return out;
}

void write_text_file(const fs::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + file.string());
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + file.string());
    }
}

void emit_outputs(const TimeSeries& ts, const Metrics& m, const fs::path& dir,
                  const std::string& scenario, const std::string& mode) {
    if (ts.size() == 0) {
        throw DomainError("emit_outputs: empty time series");
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    write_text_file(dir / "trace.csv", format_trace(ts));
    write_text_file(dir / "metrics.txt", format_metrics(m, scenario, mode));
}

void reset_summary(const fs::path& file) {
    if (file.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(file.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create " + file.parent_path().string() + ": " + ec.message());
        }
    }
    write_text_file(file, summary_header() + "\n");
}

void append_summary(const fs::path& file, const std::string& row) {
    std::ofstream out(file, std::ios::binary | std::ios::app);
    if (!out) {
        throw IoError("cannot append to " + file.string());
    }
    out << row << "\n";
}

} // namespace pvvsg

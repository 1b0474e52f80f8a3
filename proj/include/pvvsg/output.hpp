#pragma once

#include "pvvsg/sim.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pvvsg {

std::vector<std::string> trace_header(std::size_t units);

/// Comma-separated, shortest round-trip decimals.
std::string format_trace(const TimeSeries& ts);
TimeSeries parse_trace(const std::string& text);
TimeSeries read_trace(const std::filesystem::path& path);

std::string format_metrics(const Metrics& m, const std::string& scenario,
                           const std::string& mode);

std::string summary_header();
std::string summary_row(const Metrics& m, const std::string& scenario, const std::string& mode);

/// Writes trace.csv and metrics.txt into dir (created if needed). Rejects an
/// empty series with DomainError; IoError when the directory is unwritable.
void emit_outputs(const TimeSeries& ts, const Metrics& m, const std::filesystem::path& dir,
                  const std::string& scenario, const std::string& mode);

/// Starts summary.csv with only the header row.
void reset_summary(const std::filesystem::path& file);
void append_summary(const std::filesystem::path& file, const std::string& row);

void write_text_file(const std::filesystem::path& file, const std::string& text);

} // namespace pvvsg

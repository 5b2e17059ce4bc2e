#pragma once

#include "ntnsim/kpi.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace ntnsim::report {

/// File names inside each configuration's output directory.
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kCdfSeFile = "cdf_user_se.csv";
inline constexpr const char* kCdfRateFile = "cdf_user_rate.csv";
inline constexpr const char* kVerdictsFile = "verdicts.txt";
inline constexpr const char* kTableFile = "table.txt";

/// Pretty-printed JSON with every KPI, per-seed spread and verdicts.
std::string summary_json(const kpi::KpiReport& r);

/// Sorted samples with columns value,cumulative_probability (i / N).
void write_cdf_csv(std::ostream& out, std::span<const double> values);

std::string verdicts_text(const kpi::KpiReport& r);

/// Text table with one row per report: rate, 5th-pct SE, avg SE, area
/// capacity, failed requirements marked with X.
std::string results_table(std::span<const kpi::KpiReport> reports);

/// Writes summary.json, both CDF files and verdicts.txt into `dir`
/// (created if needed).
void write_report_dir(const std::string& dir, const kpi::KpiReport& r);

} // namespace ntnsim::report

#pragma once

#include <filesystem>
#include <string>

#include "mtsf/harness.hpp"

namespace mtsf {

/// Per-run detail, config echo and seed. Parsing it back with
/// report_from_json and re-aggregating reproduces every mean exactly.
Json report_to_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const Json& j);

/// One row per cell and metric:
/// dataset,model,window_length,metric,mean,runs,undefined_runs,status
std::string format_report_csv(const BenchmarkReport& report);

/// Aligned text table: one block of sMAPE/MAAPE/MASE rows per model, one
/// column per (dataset, window length).
std::string format_report_table(const BenchmarkReport& report);

struct ReportFiles {
    std::filesystem::path csv;
    std::filesystem::path json;
    std::filesystem::path table;
};

/// Writes report.csv, report.json and report.txt into `out_dir` (created if needed).
ReportFiles write_report(const BenchmarkReport& report, const std::filesystem::path& out_dir);
BenchmarkReport read_report(const std::filesystem::path& json_path);

} // namespace mtsf

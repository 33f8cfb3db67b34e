// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vitaliq/experiment.hpp"

namespace vitaliq {

enum class ReportFormat {
    csv,
    json,
};

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept;

/// Shortest decimal that parses back to the same double.
std::string format_number(double value);

/// One line per MetricsRow after a fixed header.
std::string rows_csv(const ExperimentReport& report);

/// Columns depend on the sweep: SNR sweeps give
/// algorithm,snr_db,rmse_mm_mean,rmse_mm_std,trials; window sweeps give the
/// e_i/e_q statistics per window_length_s.
std::string aggregates_csv(const ExperimentReport& report);

std::string report_json(const ExperimentReport& report);

/// csv: rows.csv, aggregates.csv, config_echo.json and notes.txt; json: report.json.
/// Creates the directory. Throws Error when a file cannot be written.
void emit_report(const ExperimentReport& report, const std::filesystem::path& dir, ReportFormat format);

/// Writes text to path, throwing Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace vitaliq

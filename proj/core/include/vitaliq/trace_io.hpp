// SPDX-License-Identifier: Apache-2.0
#pragma once

// Trace files are UTF-8 text with LF line endings: a header line `t_s,i,q`
// followed by one `time,i,q` sample per line.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "vitaliq/config.hpp"
#include "vitaliq/metrics.hpp"
#include "vitaliq/report.hpp"

namespace vitaliq {

/// Parses trace text. The sample rate is 1 / median(dt); any interval more
/// than 1% away from the median is rejected. Throws ParseError with the
/// 1-based line number of the offending line.
IqSeries parse_trace(std::string_view text);

IqSeries read_trace(const std::filesystem::path& path);

/// Formats samples with t_s = n / sample_rate, shortest round-trip decimals.
std::string format_trace(const IqSeries& iq);

void write_trace(const std::filesystem::path& path, const IqSeries& iq);

struct PipelineOptions {
    Algorithm algorithm = Algorithm::hadcm;
    CalibrationConfig calibration{};
    DemodOptions demod{};
    double wavelength_m = 0.005;
    Band band{};
    /// Only used to decide automatic pre-smoothing.
    std::optional<double> snr_db;
};

struct PipelineResult {
    IqSeries calibrated;
    PhaseSeries phase;
    SpectrumResult spectrum;
    std::optional<double> rate_bpm;
    /// Why rate_bpm is missing, if it is.
    std::string rate_error;
};

/// Calibrate, demodulate, and analyze a record. The sweeps use the same steps.
PipelineResult run_pipeline(const IqSeries& iq, const PipelineOptions& options);

PipelineResult demodulate_trace(const std::filesystem::path& input, const PipelineOptions& options);

/// csv: phase.csv, spectrum.csv and summary.json; json: demod.json.
void write_pipeline_outputs(const PipelineResult& result, const PipelineOptions& options,
                            const std::filesystem::path& dir, ReportFormat format);

} // namespace vitaliq

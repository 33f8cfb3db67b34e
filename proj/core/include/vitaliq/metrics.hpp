// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vitaliq/iq_series.hpp"

namespace vitaliq {

struct DcRelativeError {
    double e_i = 0.0;
    double e_q = 0.0;
};

/// Mean over samples of |raw - calibrated| / |true DC| per channel. 1.0 means
/// the removed offset equals the true one; values above 1 are over-subtraction.
/// Samples whose true DC is negligible are skipped.
DcRelativeError dc_relative_error(const IqSeries& raw, const IqSeries& calibrated,
                                  std::span<const double> true_dc_i, std::span<const double> true_dc_q);

/// RMS displacement difference in millimetres over the shared valid range,
/// after removing the mean difference.
double displacement_rmse_mm(const PhaseSeries& estimate, const PhaseSeries& truth);

struct SpectrumResult {
    std::vector<double> freq_hz;
    std::vector<double> amplitude_norm;
    double resolution_hz = 0.0;
};

/// Hann-windowed magnitude spectrum of the mean-removed input on
/// [0, sample_rate / 2], scaled to unit peak.
SpectrumResult spectrum(std::span<const double> x, double sample_rate_hz);

/// Spectrum of the phase over its valid range.
SpectrumResult spectrum(const PhaseSeries& series);

struct Band {
    double low_hz = 0.1;
    double high_hz = 0.6;
};

/// Strongest spectral peak inside the band, refined by a parabola through the
/// peak bin and its neighbours, in cycles per minute.
double estimate_rate_bpm(std::span<const double> x, double sample_rate_hz, Band band);

double estimate_rate_bpm(const PhaseSeries& series, Band band);

/// One trial's outcome at one sweep point. Unset optionals print as "none"
/// (snr_db) or "n/a".
struct MetricsRow {
    std::string algorithm;
    std::optional<double> snr_db;
    std::optional<double> window_length_s;
    std::optional<double> e_i;
    std::optional<double> e_q;
    std::optional<double> abs_one_minus_e_i;
    std::optional<double> abs_one_minus_e_q;
    std::optional<double> rmse_mm;
    std::optional<double> rr_error_bpm;
    std::uint64_t seed = 0;
    std::size_t trial = 0;
    /// Non-empty when the trial failed; numeric fields are then unset.
    std::string error;

    bool failed() const noexcept { return !error.empty(); }
};

} // namespace vitaliq

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vitaliq/calibration.hpp"
#include "vitaliq/demod.hpp"
#include "vitaliq/metrics.hpp"
#include "vitaliq/signal_model.hpp"

namespace vitaliq {

enum class SweepKind {
    none,
    window_lengths,
    snr_values_db,
};

struct Sweep {
    SweepKind kind = SweepKind::none;
    std::vector<double> values;
};

enum class CalibrationMethod {
    peak_valley,
    circle_fit,
    none,
};

enum class Smoothing {
    /// Pre-smooth when the scenario SNR is known and below 20 dB.
    automatic,
    on,
    off,
};

struct CalibrationConfig {
    CalibrationMethod method = CalibrationMethod::peak_valley;
    double window_s = 2.0;
    double hop_s = 0.0;
    std::optional<double> prominence;
    Smoothing smoothing = Smoothing::automatic;
    std::size_t smooth_length = 5;
    double swing_reject_fraction = 0.75;
    DcExpansion expansion = DcExpansion::linear;
};

struct ExperimentConfig {
    VitalSignScenario scenario{};
    Sweep sweep{};
    std::size_t trials = 100;
    std::vector<Algorithm> algorithms{Algorithm::atan, Algorithm::mdacm, Algorithm::acaa, Algorithm::hadcm};
    CalibrationConfig calibration{};
    DemodOptions demod{};
    Band rate_band{};
    /// Feed these demodulators the uncalibrated record instead.
    bool atan_raw_input = false;
    bool acaa_raw_input = false;
    std::string output_dir = "out";
    std::uint64_t base_seed = 0;
    /// 0 = hardware concurrency.
    unsigned threads = 0;

    /// Throws DomainError naming the first violated invariant.
    void validate() const;
};

/// Parses a JSON configuration. Missing keys keep their defaults; unknown keys
/// are rejected. Throws ParseError (with line number when known).
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration as pretty-printed JSON; parse_config of the
/// result reproduces the configuration.
std::string config_to_json(const ExperimentConfig& config);

std::string_view to_string(SweepKind kind) noexcept;
std::string_view to_string(CalibrationMethod method) noexcept;

/// Peak-valley options for a record whose SNR may be known.
PeakValleyOptions peak_valley_options(const CalibrationConfig& config, std::optional<double> snr_db);

/// DC estimate according to config.method (zero estimate for none).
DcEstimate estimate_dc(const IqSeries& iq, const CalibrationConfig& config, std::optional<double> snr_db);

} // namespace vitaliq

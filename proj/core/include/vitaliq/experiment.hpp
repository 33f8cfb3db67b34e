// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vitaliq/config.hpp"
#include "vitaliq/metrics.hpp"

namespace vitaliq {

struct Summary {
    double mean = 0.0;
    /// Sample standard deviation; 0 for a single value.
    double std = 0.0;
};

/// Statistics of one (algorithm, sweep point) group over its successful trials.
struct AggregateRow {
    std::string algorithm;
    std::optional<double> snr_db;
    std::optional<double> window_length_s;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::optional<Summary> e_i;
    std::optional<Summary> e_q;
    std::optional<Summary> abs_one_minus_e_i;
    std::optional<Summary> abs_one_minus_e_q;
    std::optional<Summary> rmse_mm;
    std::optional<Summary> rr_error_bpm;
};

struct ExperimentReport {
    SweepKind sweep = SweepKind::none;
    std::vector<MetricsRow> rows;
    std::vector<AggregateRow> aggregates;
    /// Resolved configuration as JSON text.
    std::string config_echo;
    std::string tool_version;
    /// More than 20% of the trials failed at some sweep point.
    bool degraded = false;
    /// Method choices a reader needs to interpret the numbers.
    std::vector<std::string> notes;
};

/// Groups rows by (algorithm, snr_db, window_length_s) in order of first
/// appearance. Failed rows count towards failures only.
std::vector<AggregateRow> aggregate(std::span<const MetricsRow> rows);

/// True when any group has more than 20% failed trials.
bool is_degraded(std::span<const AggregateRow> aggregates);

/// Peak-valley and circle-fit DC error for each window length x trial.
ExperimentReport run_window_sweep(const ExperimentConfig& config);

/// Calibrate, demodulate with every configured algorithm, and score the
/// displacement and rate for each SNR x trial.
ExperimentReport run_snr_sweep(const ExperimentConfig& config);

/// Dispatches on config.sweep.kind. With no sweep, runs the SNR pipeline at
/// the scenario's own SNR.
ExperimentReport run_experiment(const ExperimentConfig& config);

} // namespace vitaliq

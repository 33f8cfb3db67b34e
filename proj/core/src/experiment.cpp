// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "vitaliq/errors.hpp"
#include "vitaliq/report.hpp"
#include "vitaliq/signal_model.hpp"
#include "vitaliq/version.hpp"

namespace vitaliq {

namespace {

// Runs fn(0..count-1) on a small thread pool. Each job writes only its own
// slot, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
    unsigned workers = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            fn(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                fn(k);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

std::string describe(const std::exception& e) {
    std::string what = e.what();
    return what.empty() ? "unknown error" : what;
}

MetricsRow failed_row(std::string algorithm, std::optional<double> snr, std::optional<double> window,
                      std::uint64_t seed, std::size_t trial, std::string error) {
    MetricsRow row;
    row.algorithm = std::move(algorithm);
    row.snr_db = snr;
    row.window_length_s = window;
    row.seed = seed;
    row.trial = trial;
    row.error = std::move(error);
    return row;
}

std::vector<MetricsRow> window_trial(const ExperimentConfig& config, double window_s, std::size_t trial) {
    static constexpr CalibrationMethod kMethods[] = {CalibrationMethod::peak_valley, CalibrationMethod::circle_fit};
    VitalSignScenario scenario = config.scenario;
    scenario.seed = config.base_seed + trial;
    const auto snr = scenario.snr_db;

    std::vector<MetricsRow> rows;
    std::optional<Synthesis> synth;
    std::string synth_error;
    try {
        synth.emplace(synthesize(scenario));
    } catch (const std::exception& e) {
        synth_error = describe(e);
    }
    for (auto method : kMethods) {
        const std::string label(to_string(method));
        if (!synth) {
            rows.push_back(failed_row(label, snr, window_s, scenario.seed, trial, synth_error));
            continue;
        }
        try {
            CalibrationConfig cal = config.calibration;
            cal.method = method;
            cal.window_s = window_s;
            const auto calibrated = calibrate(synth->iq, estimate_dc(synth->iq, cal, snr));
            const auto e = dc_relative_error(synth->iq, calibrated, synth->dc_i, synth->dc_q);
            MetricsRow row;
            row.algorithm = label;
            row.snr_db = snr;
            row.window_length_s = window_s;
            row.e_i = e.e_i;
            row.e_q = e.e_q;
            row.abs_one_minus_e_i = std::abs(1.0 - e.e_i);
            row.abs_one_minus_e_q = std::abs(1.0 - e.e_q);
            row.seed = scenario.seed;
            row.trial = trial;
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            rows.push_back(failed_row(label, snr, window_s, scenario.seed, trial, describe(e)));
        }
    }
    return rows;
}

std::vector<MetricsRow> snr_trial(const ExperimentConfig& config, std::optional<double> snr, std::size_t trial) {
    VitalSignScenario scenario = config.scenario;
    scenario.snr_db = snr;
    scenario.seed = config.base_seed + trial;

    std::vector<MetricsRow> rows;
    auto fail_all = [&](const std::string& error) {
        for (auto a : config.algorithms) {
            rows.push_back(failed_row(std::string(to_string(a)), snr, std::nullopt, scenario.seed, trial, error));
        }
        return rows;
    };

    std::optional<Synthesis> synth;
    std::optional<IqSeries> calibrated;
    try {
        synth.emplace(synthesize(scenario));
        calibrated.emplace(calibrate(synth->iq, estimate_dc(synth->iq, config.calibration, snr)));
    } catch (const std::exception& e) {
        return fail_all(describe(e));
    }

    const double true_rate = 60.0 * scenario.resp_freq_hz;
    for (auto a : config.algorithms) {
        const bool raw = (a == Algorithm::atan && config.atan_raw_input) ||
                         (a == Algorithm::acaa && config.acaa_raw_input);
        try {
            const auto phase = demodulate(a, raw ? synth->iq : *calibrated, scenario.wavelength_m, config.demod);
            MetricsRow row;
            row.algorithm = std::string(to_string(a));
            row.snr_db = snr;
            row.rmse_mm = displacement_rmse_mm(phase, synth->truth);
            row.rr_error_bpm = std::abs(estimate_rate_bpm(phase, config.rate_band) - true_rate);
            row.seed = scenario.seed;
            row.trial = trial;
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            rows.push_back(failed_row(std::string(to_string(a)), snr, std::nullopt, scenario.seed, trial, describe(e)));
        }
    }
    return rows;
}

template <typename Point, typename TrialFn>
ExperimentReport run_sweep(const ExperimentConfig& config, SweepKind kind, const std::vector<Point>& points,
                           TrialFn trial_fn) {
    config.validate();
    const std::size_t jobs = points.size() * config.trials;
    std::vector<std::vector<MetricsRow>> results(jobs);
    parallel_for(jobs, config.threads, [&](std::size_t job) {
        results[job] = trial_fn(config, points[job / config.trials], job % config.trials);
    });

    ExperimentReport report;
    report.sweep = kind;
    for (auto& r : results) {
        std::move(r.begin(), r.end(), std::back_inserter(report.rows));
    }
    report.aggregates = aggregate(report.rows);
    report.degraded = is_degraded(report.aggregates);
    report.config_echo = config_to_json(config);
    report.tool_version = std::string("vitaliq ") + kVersion;
    report.notes.push_back("metrics use the edge-trimmed valid range (" + format_number(config.demod.edge_trim_s) +
                           " s at each edge)");
    if (kind == SweepKind::window_lengths) {
        report.notes.push_back("circle_fit is fitted per window, like peak_valley");
    } else {
        report.notes.push_back("calibration before demodulation: " + std::string(to_string(config.calibration.method)));
        report.notes.push_back("mdacm is the normalized DACM reconstruction (I dQ - Q dI) / (I^2 + Q^2)");
        if (config.atan_raw_input || config.acaa_raw_input) {
            report.notes.push_back(std::string("uncalibrated input for:") + (config.atan_raw_input ? " atan" : "") +
                                   (config.acaa_raw_input ? " acaa" : ""));
        }
    }
    return report;
}

std::optional<Summary> summarize(const std::vector<const MetricsRow*>& rows, std::optional<double> MetricsRow::*field) {
    std::vector<double> values;
    for (const auto* r : rows) {
        if ((r->*field).has_value()) {
            values.push_back(*(r->*field));
        }
    }
    if (values.empty()) {
        return std::nullopt;
    }
    Summary s;
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double acc = 0.0;
        for (double v : values) {
            acc += (v - s.mean) * (v - s.mean);
        }
        s.std = std::sqrt(acc / static_cast<double>(values.size() - 1));
    }
    return s;
}

} // namespace

std::vector<AggregateRow> aggregate(std::span<const MetricsRow> rows) {
    struct Group {
        AggregateRow head;
        std::vector<const MetricsRow*> ok;
    };
    std::vector<Group> groups;
    for (const auto& row : rows) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.head.algorithm == row.algorithm && g.head.snr_db == row.snr_db &&
                   g.head.window_length_s == row.window_length_s;
        });
        if (it == groups.end()) {
            Group g;
            g.head.algorithm = row.algorithm;
            g.head.snr_db = row.snr_db;
            g.head.window_length_s = row.window_length_s;
            groups.push_back(std::move(g));
            it = std::prev(groups.end());
        }
        if (row.failed()) {
            ++it->head.failures;
        } else {
            it->ok.push_back(&row);
        }
    }
    std::vector<AggregateRow> out;
    out.reserve(groups.size());
    for (auto& g : groups) {
        AggregateRow a = g.head;
        a.trials = g.ok.size();
        a.e_i = summarize(g.ok, &MetricsRow::e_i);
        a.e_q = summarize(g.ok, &MetricsRow::e_q);
        a.abs_one_minus_e_i = summarize(g.ok, &MetricsRow::abs_one_minus_e_i);
        a.abs_one_minus_e_q = summarize(g.ok, &MetricsRow::abs_one_minus_e_q);
        a.rmse_mm = summarize(g.ok, &MetricsRow::rmse_mm);
        a.rr_error_bpm = summarize(g.ok, &MetricsRow::rr_error_bpm);
        out.push_back(std::move(a));
    }
    return out;
}

bool is_degraded(std::span<const AggregateRow> aggregates) {
    return std::any_of(aggregates.begin(), aggregates.end(), [](const AggregateRow& a) {
        const std::size_t total = a.trials + a.failures;
        return total > 0 && 5 * a.failures > total;
    });
}

ExperimentReport run_window_sweep(const ExperimentConfig& config) {
    if (config.sweep.kind != SweepKind::window_lengths) {
        throw DomainError("run_window_sweep: config.sweep must list window_lengths");
    }
    return run_sweep(config, SweepKind::window_lengths, config.sweep.values, window_trial);
}

ExperimentReport run_snr_sweep(const ExperimentConfig& config) {
    std::vector<std::optional<double>> points;
    if (config.sweep.kind == SweepKind::snr_values_db) {
        points.assign(config.sweep.values.begin(), config.sweep.values.end());
    } else if (config.sweep.kind == SweepKind::none) {
        points.push_back(config.scenario.snr_db);
    } else {
        throw DomainError("run_snr_sweep: config.sweep must list snr_values_db");
    }
    return run_sweep(config, config.sweep.kind, points, snr_trial);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.sweep.kind == SweepKind::window_lengths) {
        return run_window_sweep(config);
    }
    return run_snr_sweep(config);
}

} // namespace vitaliq

// SPDX-License-Identifier: Apache-2.0
// vitaliq command-line tool: synthesize traces, run Monte-Carlo sweeps and
// demodulate recorded I/Q files.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vitaliq/config.hpp"
#include "vitaliq/errors.hpp"
#include "vitaliq/experiment.hpp"
#include "vitaliq/report.hpp"
#include "vitaliq/signal_model.hpp"
#include "vitaliq/trace_io.hpp"
#include "vitaliq/version.hpp"

namespace fs = std::filesystem;
using namespace vitaliq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDegraded = 1;
constexpr int kExitFatal = 2;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "Seed (overrides the config)");
    cmd->add_option("--out", args.out, "Output directory (overrides config output_dir)");
    cmd->add_option("--format", args.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig config = args.config_path.empty() ? ExperimentConfig{} : load_config(args.config_path);
    if (!args.out.empty()) {
        config.output_dir = args.out;
    }
    return config;
}

ReportFormat format_of(const CommonArgs& args) { return *parse_report_format(args.format); }

int synth(const CommonArgs& args, std::optional<double> snr) {
    auto config = load(args);
    if (args.seed) {
        config.scenario.seed = *args.seed;
    }
    if (snr) {
        config.scenario.snr_db = snr;
    }
    const auto s = synthesize(config.scenario);
    const fs::path dir = config.output_dir;
    fs::create_directories(dir);
    write_trace(dir / "trace.csv", s.iq);

    std::string truth = "t_s,displacement_m,phase_rad,dc_i,dc_q\n";
    for (std::size_t n = 0; n < s.iq.size(); ++n) {
        truth += format_number(static_cast<double>(n) / s.iq.sample_rate_hz()) + ',' +
                 format_number(s.truth.displacement_m[n]) + ',' + format_number(s.truth.phase_rad[n]) + ',' +
                 format_number(s.dc_i[n]) + ',' + format_number(s.dc_q[n]) + '\n';
    }
    write_text_file(dir / "truth.csv", truth);
    write_text_file(dir / "config_echo.json", config_to_json(config));
    std::cout << "wrote " << s.iq.size() << " samples to " << (dir / "trace.csv").string() << '\n';
    return kExitOk;
}

int sweep(const CommonArgs& args, SweepKind kind, const std::vector<double>& points,
          std::optional<std::size_t> trials, std::optional<unsigned> threads) {
    auto config = load(args);
    if (args.seed) {
        config.base_seed = *args.seed;
    }
    if (trials) {
        config.trials = *trials;
    }
    if (threads) {
        config.threads = *threads;
    }
    if (!points.empty()) {
        config.sweep = Sweep{kind, points};
    } else if (config.sweep.kind != kind) {
        config.sweep = kind == SweepKind::window_lengths ? Sweep{kind, {1.0, 2.0, 3.0, 4.0}}
                                                         : Sweep{kind, {10.0, 15.0, 20.0, 25.0, 30.0}};
    }
    const auto report = kind == SweepKind::window_lengths ? run_window_sweep(config) : run_snr_sweep(config);
    emit_report(report, config.output_dir, format_of(args));

    for (const auto& a : report.aggregates) {
        std::cout << a.algorithm;
        if (a.window_length_s) {
            std::cout << " window=" << format_number(*a.window_length_s) << "s";
        }
        if (a.snr_db) {
            std::cout << " snr=" << format_number(*a.snr_db) << "dB";
        }
        if (a.e_i && a.e_q) {
            std::cout << " e_i=" << a.e_i->mean << " e_q=" << a.e_q->mean;
        }
        if (a.rmse_mm) {
            std::cout << " rmse_mm=" << a.rmse_mm->mean << " (std " << a.rmse_mm->std << ")";
        }
        std::cout << " trials=" << a.trials;
        if (a.failures > 0) {
            std::cout << " failures=" << a.failures;
        }
        std::cout << '\n';
    }
    if (report.degraded) {
        std::cerr << "run degraded: more than 20% of trials failed at some sweep point\n";
        return kExitDegraded;
    }
    return kExitOk;
}

int demod(const CommonArgs& args, const std::string& input, const std::string& algorithm,
          const std::string& calibration, std::optional<double> wavelength) {
    const auto config = load(args);
    PipelineOptions options;
    options.calibration = config.calibration;
    options.demod = config.demod;
    options.band = config.rate_band;
    options.wavelength_m = wavelength.value_or(config.scenario.wavelength_m);
    options.algorithm = *parse_algorithm(algorithm);
    if (!calibration.empty()) {
        options.calibration.method = calibration == "peak_valley"  ? CalibrationMethod::peak_valley
                                     : calibration == "circle_fit" ? CalibrationMethod::circle_fit
                                                                   : CalibrationMethod::none;
    }
    const auto result = demodulate_trace(input, options);
    write_pipeline_outputs(result, options, config.output_dir, format_of(args));
    if (result.rate_bpm) {
        std::cout << "rate_bpm=" << *result.rate_bpm << '\n';
    } else {
        std::cout << "rate_bpm=n/a (" << result.rate_error << ")\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radar vital-sign I/Q calibration and phase demodulation"};
    app.set_version_flag("--version", std::string("vitaliq ") + kVersion);
    app.require_subcommand(1);

    CommonArgs synth_args;
    std::optional<double> synth_snr;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize a scenario and write trace.csv and truth.csv");
    add_common(synth_cmd, synth_args);
    synth_cmd->add_option("--snr-db", synth_snr, "Per-channel SNR (overrides the config)");

    CommonArgs window_args;
    std::vector<double> windows;
    std::optional<std::size_t> window_trials;
    std::optional<unsigned> window_threads;
    auto* window_cmd = app.add_subcommand("sweep-window", "DC-offset error of peak-valley vs circle fit per window");
    add_common(window_cmd, window_args);
    window_cmd->add_option("--windows", windows, "Window lengths in seconds");
    window_cmd->add_option("--trials", window_trials, "Trials per sweep point")->check(CLI::PositiveNumber);
    window_cmd->add_option("--threads", window_threads, "Worker threads (0 = all cores)");

    CommonArgs snr_args;
    std::vector<double> snrs;
    std::optional<std::size_t> snr_trials;
    std::optional<unsigned> snr_threads;
    auto* snr_cmd = app.add_subcommand("sweep-snr", "Displacement RMSE of each demodulator per SNR");
    add_common(snr_cmd, snr_args);
    snr_cmd->add_option("--snrs", snrs, "SNR values in dB");
    snr_cmd->add_option("--trials", snr_trials, "Trials per sweep point")->check(CLI::PositiveNumber);
    snr_cmd->add_option("--threads", snr_threads, "Worker threads (0 = all cores)");

    CommonArgs demod_args;
    std::string input;
    std::string algorithm = "hadcm";
    std::string calibration;
    std::optional<double> wavelength;
    auto* demod_cmd = app.add_subcommand("demod", "Demodulate a recorded t_s,i,q trace");
    add_common(demod_cmd, demod_args);
    demod_cmd->add_option("input", input, "Trace file")->required()->check(CLI::ExistingFile);
    demod_cmd->add_option("--algorithm", algorithm)->check(CLI::IsMember({"atan", "mdacm", "acaa", "hadcm"}));
    demod_cmd->add_option("--calibration", calibration)->check(CLI::IsMember({"peak_valley", "circle_fit", "none"}));
    demod_cmd->add_option("--wavelength", wavelength, "Carrier wavelength in metres")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitFatal;
    }

    try {
        if (*synth_cmd) {
            return synth(synth_args, synth_snr);
        }
        if (*window_cmd) {
            return sweep(window_args, SweepKind::window_lengths, windows, window_trials, window_threads);
        }
        if (*snr_cmd) {
            return sweep(snr_args, SweepKind::snr_values_db, snrs, snr_trials, snr_threads);
        }
        if (*demod_cmd) {
            return demod(demod_args, input, algorithm, calibration, wavelength);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFatal;
    }
    return kExitFatal;
}

// SPDX-License-Identifier: Apache-2.0
#pragma once

// Quadrature baseband synthesizer for a breathing target:
//
//   I(t) = A_I(t) cos(4 pi (d0 + x(t) + dd(t)) / lambda + phi_I) + DC_I(t) + n_I(t)
//   Q(t) = A_Q(t) sin(4 pi (d0 + x(t) + dd(t)) / lambda + phi_Q) + DC_Q(t) + n_Q(t)
//
// with x(t) the chest displacement (respiration + heartbeat sinusoids) and
// dd(t) random body movement. Residual phase noise is not modelled.

#include <cstdint>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "vitaliq/iq_series.hpp"

namespace vitaliq {

struct ConstantDc {
    double value = 0.0;
};

/// Uniform random knots in (lo, hi) every segment_s, linearly interpolated.
struct PiecewiseRandomDc {
    double lo = 1.0;
    double hi = 3.0;
    double segment_s = 1.0;
};

/// Straight line from start (t = 0) to end (t = duration).
struct LinearRampDc {
    double start = 0.0;
    double end = 0.0;
};

using DcProfile = std::variant<ConstantDc, PiecewiseRandomDc, LinearRampDc>;

struct ConstantAmplitude {
    double value = 1.0;
};

/// mean * (1 + depth * sin(2 pi freq_hz t))
struct SlowSineAmplitude {
    double mean = 1.0;
    double depth = 0.0;
    double freq_hz = 0.0;
};

using AmplitudeProfile = std::variant<ConstantAmplitude, SlowSineAmplitude>;

struct NoMotion {};

struct SlowSineMotion {
    double amp_m = 0.05;
    double freq_hz = 0.05;
};

/// Per-sample uniform steps in [-step_m, step_m], clamped to [-clamp_m, clamp_m].
struct BoundedWalkMotion {
    double step_m = 0.0005;
    double clamp_m = 0.05;
};

using MotionProfile = std::variant<NoMotion, SlowSineMotion, BoundedWalkMotion>;

/// Full parameter set of the generative model. Defaults reproduce the
/// benchmark scenario: 20 Hz, 60 s, 0.3/1.3 Hz respiration/heartbeat at
/// 6/0.3 mm, phi_I = pi/12, phi_Q = pi/15, DC drifting inside (1, 3).
struct VitalSignScenario {
    double duration_s = 60.0;
    double sample_rate_hz = 20.0;
    double wavelength_m = 0.005;
    double d0_m = 0.6;
    double resp_freq_hz = 0.3;
    double heart_freq_hz = 1.3;
    double resp_amp_m = 6e-3;
    double heart_amp_m = 0.3e-3;
    double phi_i_rad = std::numbers::pi / 12.0;
    double phi_q_rad = std::numbers::pi / 15.0;
    AmplitudeProfile amp_i = ConstantAmplitude{1.0};
    AmplitudeProfile amp_q = ConstantAmplitude{0.95};
    DcProfile dc_i = PiecewiseRandomDc{};
    DcProfile dc_q = PiecewiseRandomDc{};
    MotionProfile body_motion = NoMotion{};
    /// Per-channel SNR against the AC signal power; nullopt disables noise.
    std::optional<double> snr_db;
    std::uint64_t seed = 0;

    /// Throws DomainError naming the first violated invariant.
    void validate() const;

    std::size_t num_samples() const;
};

/// x(t) = resp_amp sin(2 pi resp_freq t) + heart_amp sin(2 pi heart_freq t).
/// Throws DomainError when t is outside [0, duration_s].
double chest_displacement(const VitalSignScenario& scenario, double t);

/// p(t) = 4 pi x(t) / lambda; excludes d0 and body movement.
double true_phase(const VitalSignScenario& scenario, double t);

/// Synthesized record plus every ground-truth quantity the metrics need.
struct Synthesis {
    IqSeries iq;
    PhaseSeries truth;
    std::vector<double> dc_i;
    std::vector<double> dc_q;
    std::vector<double> amp_i;
    std::vector<double> amp_q;
    std::vector<double> body_motion_m;
    /// Noise standard deviations actually applied (0 when noise is disabled).
    double noise_sigma_i = 0.0;
    double noise_sigma_q = 0.0;
};

/// Deterministic for a fixed scenario (including seed). Each random component
/// draws from its own seeded stream, so toggling noise leaves the DC and
/// motion realizations untouched.
Synthesis synthesize(const VitalSignScenario& scenario);

} // namespace vitaliq

// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "vitaliq/errors.hpp"

namespace vitaliq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxBodyMotion = 0.1;

enum Stream : std::uint32_t {
    kStreamDcI = 1,
    kStreamDcQ = 2,
    kStreamMotion = 3,
    kStreamNoiseI = 4,
    kStreamNoiseQ = 5,
};

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw DomainError("VitalSignScenario: " + what);
    }
}

bool finite_nonneg(double v) {
    return std::isfinite(v) && v >= 0.0;
}

void validate_dc(const DcProfile& p, const char* name) {
    const std::string ch = name;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDc>) {
                require(std::isfinite(d.value), ch + " constant value must be finite");
            } else if constexpr (std::is_same_v<T, PiecewiseRandomDc>) {
                require(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi,
                        ch + " piecewise_random requires lo < hi");
                require(d.segment_s > 0.0 && std::isfinite(d.segment_s),
                        ch + " piecewise_random segment_s must be > 0");
            } else {
                require(std::isfinite(d.start) && std::isfinite(d.end),
                        ch + " linear_ramp endpoints must be finite");
            }
        },
        p);
}

void validate_amplitude(const AmplitudeProfile& p, const char* name) {
    const std::string ch = name;
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                require(a.value > 0.0 && std::isfinite(a.value), ch + " amplitude must be > 0");
            } else {
                require(a.mean > 0.0 && std::isfinite(a.mean), ch + " amplitude mean must be > 0");
                require(a.depth >= 0.0 && a.depth < 1.0, ch + " amplitude depth must be in [0, 1)");
                require(finite_nonneg(a.freq_hz), ch + " amplitude freq_hz must be >= 0");
            }
        },
        p);
}

std::vector<double> realize_dc(const DcProfile& profile, std::size_t n, double fs, double duration,
                               std::mt19937_64 rng) {
    std::vector<double> out(n);
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDc>) {
                std::fill(out.begin(), out.end(), d.value);
            } else if constexpr (std::is_same_v<T, PiecewiseRandomDc>) {
                const auto segments = static_cast<std::size_t>(std::ceil(duration / d.segment_s));
                std::uniform_real_distribution<double> uni(d.lo, d.hi);
                std::vector<double> knots(segments + 1);
                for (auto& k : knots) {
                    k = uni(rng);
                }
                for (std::size_t s = 0; s < n; ++s) {
                    const double pos = (static_cast<double>(s) / fs) / d.segment_s;
                    const auto k = std::min(static_cast<std::size_t>(pos), segments - 1);
                    const double frac = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
                    out[s] = knots[k] + frac * (knots[k + 1] - knots[k]);
                }
            } else {
                for (std::size_t s = 0; s < n; ++s) {
                    const double t = static_cast<double>(s) / fs;
                    out[s] = d.start + (d.end - d.start) * (t / duration);
                }
            }
        },
        profile);
    return out;
}

std::vector<double> realize_amplitude(const AmplitudeProfile& profile, std::size_t n, double fs) {
    std::vector<double> out(n);
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ConstantAmplitude>) {
                std::fill(out.begin(), out.end(), a.value);
            } else {
                for (std::size_t s = 0; s < n; ++s) {
                    const double t = static_cast<double>(s) / fs;
                    out[s] = a.mean * (1.0 + a.depth * std::sin(kTwoPi * a.freq_hz * t));
                }
            }
        },
        profile);
    return out;
}

std::vector<double> realize_motion(const MotionProfile& profile, std::size_t n, double fs,
                                   std::mt19937_64 rng) {
    std::vector<double> out(n, 0.0);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SlowSineMotion>) {
                for (std::size_t s = 0; s < n; ++s) {
                    const double t = static_cast<double>(s) / fs;
                    out[s] = m.amp_m * std::sin(kTwoPi * m.freq_hz * t);
                }
            } else if constexpr (std::is_same_v<T, BoundedWalkMotion>) {
                std::uniform_real_distribution<double> step(-m.step_m, m.step_m);
                double pos = 0.0;
                for (std::size_t s = 1; s < n; ++s) {
                    pos = std::clamp(pos + step(rng), -m.clamp_m, m.clamp_m);
                    out[s] = pos;
                }
            }
        },
        profile);
    return out;
}

} // namespace

void VitalSignScenario::validate() const {
    require(duration_s > 0.0 && std::isfinite(duration_s), "duration_s must be > 0");
    require(sample_rate_hz > 0.0 && std::isfinite(sample_rate_hz), "sample_rate_hz must be > 0");
    require(wavelength_m > 0.0 && std::isfinite(wavelength_m), "wavelength_m must be > 0");
    require(finite_nonneg(d0_m), "d0_m must be >= 0");
    require(finite_nonneg(resp_freq_hz) && finite_nonneg(heart_freq_hz),
            "respiration/heartbeat frequencies must be >= 0");
    require(finite_nonneg(resp_amp_m) && finite_nonneg(heart_amp_m),
            "respiration/heartbeat amplitudes must be >= 0");
    require(std::isfinite(phi_i_rad) && std::isfinite(phi_q_rad), "phase imbalances must be finite");
    require(duration_s * sample_rate_hz >= 4.0, "duration_s * sample_rate_hz must be >= 4");
    require(!snr_db || std::isfinite(*snr_db), "snr_db must be finite");
    validate_amplitude(amp_i, "amp_i");
    validate_amplitude(amp_q, "amp_q");
    validate_dc(dc_i, "dc_i");
    validate_dc(dc_q, "dc_q");
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SlowSineMotion>) {
                require(finite_nonneg(m.amp_m) && m.amp_m <= kMaxBodyMotion,
                        "body_motion amp_m must be in [0, 0.1] m");
                require(finite_nonneg(m.freq_hz), "body_motion freq_hz must be >= 0");
            } else if constexpr (std::is_same_v<T, BoundedWalkMotion>) {
                require(finite_nonneg(m.clamp_m) && m.clamp_m <= kMaxBodyMotion,
                        "body_motion clamp_m must be in [0, 0.1] m");
                require(finite_nonneg(m.step_m), "body_motion step_m must be >= 0");
            }
        },
        body_motion);
}

std::size_t VitalSignScenario::num_samples() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

double chest_displacement(const VitalSignScenario& s, double t) {
    if (!(t >= 0.0 && t <= s.duration_s)) {
        throw DomainError("chest_displacement: t = " + std::to_string(t) + " outside [0, " +
                          std::to_string(s.duration_s) + "]");
    }
    return s.resp_amp_m * std::sin(kTwoPi * s.resp_freq_hz * t) +
           s.heart_amp_m * std::sin(kTwoPi * s.heart_freq_hz * t);
}

double true_phase(const VitalSignScenario& s, double t) {
    return 4.0 * std::numbers::pi * chest_displacement(s, t) / s.wavelength_m;
}

Synthesis synthesize(const VitalSignScenario& s) {
    s.validate();
    const std::size_t n = s.num_samples();
    const double fs = s.sample_rate_hz;

    auto dc_i = realize_dc(s.dc_i, n, fs, s.duration_s, make_stream(s.seed, kStreamDcI));
    auto dc_q = realize_dc(s.dc_q, n, fs, s.duration_s, make_stream(s.seed, kStreamDcQ));
    auto amp_i = realize_amplitude(s.amp_i, n, fs);
    auto amp_q = realize_amplitude(s.amp_q, n, fs);
    auto motion = realize_motion(s.body_motion, n, fs, make_stream(s.seed, kStreamMotion));

    std::vector<double> ac_i(n), ac_q(n), truth(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        // t stays inside [0, duration] even when rounding adds a sample.
        const double t = std::min(static_cast<double>(idx) / fs, s.duration_s);
        const double x = chest_displacement(s, t);
        const double arg = 4.0 * std::numbers::pi * (s.d0_m + x + motion[idx]) / s.wavelength_m;
        ac_i[idx] = amp_i[idx] * std::cos(arg + s.phi_i_rad);
        ac_q[idx] = amp_q[idx] * std::sin(arg + s.phi_q_rad);
        truth[idx] = true_phase(s, t);
    }

    double sigma_i = 0.0;
    double sigma_q = 0.0;
    std::vector<double> i(n), q(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        i[idx] = ac_i[idx] + dc_i[idx];
        q[idx] = ac_q[idx] + dc_q[idx];
    }
    if (s.snr_db) {
        auto power = [](const std::vector<double>& v) {
            double acc = 0.0;
            for (double x : v) {
                acc += x * x;
            }
            return acc / static_cast<double>(v.size());
        };
        const double ratio = std::pow(10.0, *s.snr_db / 10.0);
        sigma_i = std::sqrt(power(ac_i) / ratio);
        sigma_q = std::sqrt(power(ac_q) / ratio);
        auto rng_i = make_stream(s.seed, kStreamNoiseI);
        auto rng_q = make_stream(s.seed, kStreamNoiseQ);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t idx = 0; idx < n; ++idx) {
            i[idx] += sigma_i * gauss(rng_i);
        }
        gauss.reset();
        for (std::size_t idx = 0; idx < n; ++idx) {
            q[idx] += sigma_q * gauss(rng_q);
        }
    }

    Synthesis out{
        .iq = IqSeries(std::move(i), std::move(q), fs),
        .truth = make_phase_series(std::move(truth), fs, IndexRange{0, n}, s.wavelength_m),
        .dc_i = std::move(dc_i),
        .dc_q = std::move(dc_q),
        .amp_i = std::move(amp_i),
        .amp_q = std::move(amp_q),
        .body_motion_m = std::move(motion),
        .noise_sigma_i = sigma_i,
        .noise_sigma_q = sigma_q,
    };
    return out;
}

} // namespace vitaliq

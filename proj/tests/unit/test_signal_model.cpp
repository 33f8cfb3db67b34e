// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vitaliq/errors.hpp"
#include "vitaliq/signal_model.hpp"

using namespace vitaliq;

namespace {

constexpr double kPi = std::numbers::pi;

VitalSignScenario clean_scenario() {
    VitalSignScenario s;
    s.dc_i = ConstantDc{2.0};
    s.dc_q = ConstantDc{1.5};
    return s;
}

double mean_square(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) {
        acc += v * v;
    }
    return acc / static_cast<double>(x.size());
}

} // namespace

TEST_CASE("chest displacement") {
    VitalSignScenario s;
    CHECK(chest_displacement(s, 0.0) == 0.0);

    s.heart_amp_m = 0.0;
    CHECK(std::abs(chest_displacement(s, 1.0 / (4.0 * 0.3)) - 0.006) < 1e-15);

    const VitalSignScenario defaults;
    const double t = 0.7;
    const double expected = 6e-3 * std::sin(2 * kPi * 0.3 * t) + 0.3e-3 * std::sin(2 * kPi * 1.3 * t);
    CHECK(std::abs(chest_displacement(defaults, t) - expected) < 1e-15);

    CHECK_THROWS_AS(chest_displacement(defaults, -0.1), DomainError);
    CHECK_THROWS_AS(chest_displacement(defaults, 60.5), DomainError);
}

TEST_CASE("true phase") {
    VitalSignScenario s;
    CHECK(true_phase(s, 0.0) == 0.0);

    // Quarter-wavelength displacement is a phase of pi.
    s.heart_amp_m = 0.0;
    s.resp_amp_m = s.wavelength_m / 4.0;
    CHECK(std::abs(true_phase(s, 1.0 / (4.0 * s.resp_freq_hz)) - kPi) < 1e-12);

    const VitalSignScenario defaults;
    const double t = 2.5;
    const double x = 6e-3 * std::sin(2 * kPi * 0.3 * t) + 0.3e-3 * std::sin(2 * kPi * 1.3 * t);
    CHECK(std::abs(true_phase(defaults, t) - 4 * kPi * x / 0.005) < 1e-12);
}

TEST_CASE("scenario validation") {
    VitalSignScenario s;
    CHECK_NOTHROW(s.validate());

    auto bad = s;
    bad.duration_s = 0.1;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.sample_rate_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.dc_i = PiecewiseRandomDc{3.0, 1.0, 10.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.dc_q = PiecewiseRandomDc{1.0, 3.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.amp_i = SlowSineAmplitude{1.0, 1.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.amp_q = ConstantAmplitude{0.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.body_motion = SlowSineMotion{0.2, 0.05};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.body_motion = BoundedWalkMotion{0.001, 0.15};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = s;
    bad.wavelength_m = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(synthesize(bad), DomainError);
}

TEST_CASE("default scenario has 1200 samples") {
    const auto s = synthesize(VitalSignScenario{});
    CHECK(s.iq.size() == 1200);
    CHECK(s.iq.sample_rate_hz() == 20.0);
    CHECK(s.truth.size() == 1200);
    for (std::size_t n = 0; n < s.iq.size(); ++n) {
        CHECK(s.dc_i[n] > 1.0);
        CHECK(s.dc_i[n] < 3.0);
        CHECK(s.dc_q[n] > 1.0);
        CHECK(s.dc_q[n] < 3.0);
    }
}

TEST_CASE("constant phase gives a fixed point") {
    VitalSignScenario s;
    s.resp_amp_m = 0.0;
    s.heart_amp_m = 0.0;
    s.d0_m = s.wavelength_m; // 4 pi d0 / lambda = 4 pi
    s.phi_i_rad = 0.0;
    s.phi_q_rad = 0.0;
    s.amp_i = ConstantAmplitude{1.0};
    s.amp_q = ConstantAmplitude{1.0};
    s.dc_i = ConstantDc{0.0};
    s.dc_q = ConstantDc{0.0};
    const auto out = synthesize(s);
    for (std::size_t n = 0; n < out.iq.size(); ++n) {
        CHECK(std::abs(out.iq.i()[n] - 1.0) < 1e-12);
        CHECK(std::abs(out.iq.q()[n]) < 1e-12);
    }
}

TEST_CASE("noise-free samples match the per-sample formula") {
    for (int variant = 0; variant < 3; ++variant) {
        VitalSignScenario s;
        s.seed = 11 + static_cast<std::uint64_t>(variant);
        if (variant == 1) {
            s.dc_i = LinearRampDc{1.0, 3.0};
            s.dc_q = ConstantDc{-0.5};
            s.amp_i = SlowSineAmplitude{1.0, 0.2, 0.05};
        }
        if (variant == 2) {
            s.body_motion = SlowSineMotion{0.05, 0.05};
        }
        const auto out = synthesize(s);
        double max_diff = 0.0;
        for (std::size_t n = 0; n < out.iq.size(); ++n) {
            const double t = static_cast<double>(n) / s.sample_rate_hz;
            const double x = s.resp_amp_m * std::sin(2 * kPi * s.resp_freq_hz * t) +
                             s.heart_amp_m * std::sin(2 * kPi * s.heart_freq_hz * t);
            double dd = 0.0;
            double dc_i = out.dc_i[n];
            double dc_q = out.dc_q[n];
            double a_i = 1.0;
            if (variant == 1) {
                dc_i = 1.0 + 2.0 * t / 60.0;
                dc_q = -0.5;
                a_i = 1.0 * (1.0 + 0.2 * std::sin(2 * kPi * 0.05 * t));
            }
            if (variant == 2) {
                dd = 0.05 * std::sin(2 * kPi * 0.05 * t);
            }
            const double arg = 4 * kPi * (s.d0_m + x + dd) / s.wavelength_m;
            max_diff = std::max(max_diff, std::abs(out.iq.i()[n] - (a_i * std::cos(arg + s.phi_i_rad) + dc_i)));
            max_diff = std::max(max_diff, std::abs(out.iq.q()[n] - (0.95 * std::sin(arg + s.phi_q_rad) + dc_q)));
        }
        CHECK(max_diff < 1e-12);
    }
}

TEST_CASE("ground truth equals true_phase on the sample grid") {
    const VitalSignScenario s;
    const auto out = synthesize(s);
    for (std::size_t n = 0; n < out.truth.size(); ++n) {
        CHECK(out.truth.phase_rad[n] == true_phase(s, static_cast<double>(n) / s.sample_rate_hz));
    }
    CHECK(out.truth.valid.begin == 0);
    CHECK(out.truth.valid.end == out.truth.size());
    REQUIRE(out.truth.has_displacement());
}

TEST_CASE("synthesis is deterministic per seed") {
    VitalSignScenario s;
    s.snr_db = 15.0;
    s.body_motion = BoundedWalkMotion{};
    s.seed = 42;
    const auto a = synthesize(s);
    const auto b = synthesize(s);
    for (std::size_t n = 0; n < a.iq.size(); ++n) {
        REQUIRE(a.iq.i()[n] == b.iq.i()[n]);
        REQUIRE(a.iq.q()[n] == b.iq.q()[n]);
    }
    s.seed = 43;
    const auto c = synthesize(s);
    bool differs = false;
    for (std::size_t n = 0; n < a.iq.size(); ++n) {
        differs = differs || a.iq.i()[n] != c.iq.i()[n];
    }
    CHECK(differs);
}

TEST_CASE("noise toggling leaves DC and motion realizations alone") {
    VitalSignScenario s;
    s.seed = 5;
    s.body_motion = BoundedWalkMotion{};
    const auto clean = synthesize(s);
    s.snr_db = 10.0;
    const auto noisy = synthesize(s);
    CHECK(clean.dc_i == noisy.dc_i);
    CHECK(clean.dc_q == noisy.dc_q);
    CHECK(clean.body_motion_m == noisy.body_motion_m);
    CHECK(clean.noise_sigma_i == 0.0);
    CHECK(noisy.noise_sigma_i > 0.0);
}

TEST_CASE("measured SNR matches the requested SNR") {
    for (double snr : {10.0, 20.0, 30.0}) {
        double sum_db = 0.0;
        const int trials = 20;
        for (int trial = 0; trial < trials; ++trial) {
            VitalSignScenario s;
            s.duration_s = 600.0; // 12000 samples
            s.seed = 1000 + static_cast<std::uint64_t>(trial);
            const auto clean = synthesize(s);
            s.snr_db = snr;
            const auto noisy = synthesize(s);

            std::vector<double> ac(clean.iq.size());
            std::vector<double> noise(clean.iq.size());
            for (std::size_t n = 0; n < ac.size(); ++n) {
                ac[n] = clean.iq.i()[n] - clean.dc_i[n];
                noise[n] = noisy.iq.i()[n] - clean.iq.i()[n];
            }
            double mean_ac = 0.0;
            for (double v : ac) {
                mean_ac += v;
            }
            mean_ac /= static_cast<double>(ac.size());
            for (double& v : ac) {
                v -= mean_ac;
            }
            sum_db += 10.0 * std::log10(mean_square(ac) / mean_square(noise));
        }
        CHECK(std::abs(sum_db / trials - snr) < 0.5);
    }
}

TEST_CASE("imbalance-corrected trajectory lies on the unit circle") {
    VitalSignScenario s = clean_scenario();
    s.amp_i = ConstantAmplitude{1.3};
    s.amp_q = ConstantAmplitude{0.7};
    const auto out = synthesize(s);
    const double ci = std::cos(s.phi_i_rad);
    const double si = std::sin(s.phi_i_rad);
    const double cq = std::cos(s.phi_q_rad);
    const double sq = std::sin(s.phi_q_rad);
    const double det = ci * cq + si * sq;
    double worst = 0.0;
    for (std::size_t n = 0; n < out.iq.size(); ++n) {
        // u = cos(psi + phi_I), v = sin(psi + phi_Q); solve for (cos psi, sin psi).
        const double u = (out.iq.i()[n] - 2.0) / 1.3;
        const double v = (out.iq.q()[n] - 1.5) / 0.7;
        const double c = (cq * u + si * v) / det;
        const double sn = (-sq * u + ci * v) / det;
        worst = std::max(worst, std::abs(c * c + sn * sn - 1.0));
    }
    CHECK(worst < 1e-12);
}

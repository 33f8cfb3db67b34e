// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vitaliq/calibration.hpp"
#include "vitaliq/errors.hpp"
#include "vitaliq/signal_model.hpp"

using namespace vitaliq;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sampled(std::size_t n, double fs, auto&& f) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = f(static_cast<double>(k) / fs);
    }
    return out;
}

bool alternates(const ExtremaSet& e) {
    std::vector<std::pair<std::size_t, int>> merged;
    for (auto p : e.peaks) {
        merged.emplace_back(p, 1);
    }
    for (auto v : e.valleys) {
        merged.emplace_back(v, -1);
    }
    std::sort(merged.begin(), merged.end());
    for (std::size_t k = 1; k < merged.size(); ++k) {
        if (merged[k].second == merged[k - 1].second || merged[k].first == merged[k - 1].first) {
            return false;
        }
    }
    return std::is_sorted(e.peaks.begin(), e.peaks.end()) && std::is_sorted(e.valleys.begin(), e.valleys.end());
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::all_of(a.begin(), a.end(), [&](std::size_t v) { return std::find(b.begin(), b.end(), v) != b.end(); });
}

} // namespace

TEST_CASE("extrema of a clean sinusoid") {
    const double fs = 20.0;
    const auto x = sampled(200, fs, [](double t) { return std::sin(2 * kPi * 0.3 * t); });
    const auto e = find_extrema(x, 0.5);
    REQUIRE(e.peaks.size() == 3);
    REQUIRE(e.valleys.size() == 3);
    const double period = 1.0 / 0.3;
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(static_cast<double>(e.peaks[k]) / fs - (0.25 + static_cast<double>(k)) * period) <= 1.0 / fs);
        CHECK(std::abs(static_cast<double>(e.valleys[k]) / fs - (0.75 + static_cast<double>(k)) * period) <= 1.0 / fs);
    }
    CHECK(alternates(e));
}

TEST_CASE("constant input has no extrema") {
    const std::vector<double> x(50, 1.25);
    CHECK_THROWS_AS(find_extrema(x, 0.0), InsufficientExtrema);
    const std::vector<double> ramp = sampled(50, 1.0, [](double t) { return t; });
    CHECK_THROWS_AS(find_extrema(ramp, 0.0), InsufficientExtrema);
    CHECK_THROWS_AS(find_extrema(std::vector<double>{1.0, 2.0}, 0.0), DomainError);
    CHECK_THROWS_AS(find_extrema(x, -1.0), DomainError);
}

TEST_CASE("plateau extrema are reported once") {
    const std::vector<double> x{0, 1, 3, 3, 3, 1, 0, -2, -2, 0, 1};
    const auto e = find_extrema(x, 0.5);
    REQUIRE(e.peaks.size() == 1);
    CHECK(e.peaks[0] == 3);
    REQUIRE(e.valleys.size() == 1);
    CHECK((e.valleys[0] == 7 || e.valleys[0] == 8));
}

TEST_CASE("extrema agree with the brute-force prominence scan") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto x = oracle::random_vector(300, seed);
        for (double prom : {0.0, 0.3, 0.8}) {
            const auto e = find_extrema(x, prom);
            CHECK(alternates(e));
            const auto peaks = oracle::prominent_peaks(x, prom);
            const auto valleys = oracle::prominent_valleys(x, prom);
            CHECK(subset(e.peaks, peaks));
            CHECK(subset(e.valleys, valleys));
            // Dropped candidates only come from runs of same-type extrema.
            CHECK(e.peaks.size() + e.valleys.size() >= std::min(peaks.size(), valleys.size()) * 2 - 1);
        }
    }
}

TEST_CASE("smoothed noisy sinusoid keeps the noise-free extrema count") {
    const double fs = 20.0;
    const std::size_t n = 200;
    const auto clean = sampled(n, fs, [](double t) { return std::sin(2 * kPi * 0.3 * t); });
    const auto reference = find_extrema(clean, 0.5);
    // 10 dB SNR against the unit sinusoid's power of 1/2. Raw samples at this
    // level carry ripples of prominence > 0.5, so the 5-tap pre-smoothing used
    // below 20 dB is applied first.
    const double sigma = std::sqrt(0.5 / 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::mt19937_64 rng(900 + static_cast<std::uint64_t>(trial));
        std::normal_distribution<double> noise(0.0, sigma);
        auto x = clean;
        for (double& v : x) {
            v += noise(rng);
        }
        const auto smooth = moving_average(x, 5);
        const auto e = find_extrema(smooth, 0.5);
        CHECK(alternates(e));
        CHECK(e.peaks == oracle::prominent_peaks(smooth, 0.5));
        CHECK(e.valleys == oracle::prominent_valleys(smooth, 0.5));
        CHECK(e.peaks.size() == reference.peaks.size());
        CHECK(e.valleys.size() == reference.valleys.size());
    }
}

TEST_CASE("moving average") {
    const std::vector<double> x{1, 2, 3, 4, 10};
    const auto y = moving_average(x, 3);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == doctest::Approx(2.0));
    CHECK(y[3] == doctest::Approx(17.0 / 3.0));
    CHECK(y[4] == 10.0);
    CHECK(moving_average(x, 1) == x);
}

TEST_CASE("peak-valley samples recover a constant offset exactly") {
    const auto x = sampled(1200, 20.0, [](double t) { return 0.8 * std::sin(2 * kPi * 0.3 * t + 0.4) + 2.25; });
    const auto e = find_extrema(x, 0.3);
    const auto s = peak_valley_dc_samples(x, e);
    CHECK(s.size() == e.peaks.size() + e.valleys.size() - 1);
    for (const auto& d : s) {
        // Half a period apart is not a whole number of samples here, so the
        // pair straddles the true extrema asymmetrically by < 1 sample.
        CHECK(std::abs(d.value - 2.25) < 0.8 * (1.0 - std::cos(2 * kPi * 0.3 / 20.0)));
    }

    const auto y = sampled(1200, 20.0, [](double t) { return 0.8 * std::sin(2 * kPi * 0.25 * t + 0.4) + 2.25; });
    for (const auto& d : peak_valley_dc_samples(y, find_extrema(y, 0.3))) {
        CHECK(std::abs(d.value - 2.25) < 1e-12);
    }
}

TEST_CASE("peak-valley samples track a DC ramp") {
    const double fs = 20.0;
    const double slope = 2.0 / 60.0;
    const auto x = sampled(1200, fs, [&](double t) { return std::sin(2 * kPi * 0.3 * t) + 1.0 + slope * t; });
    const auto s = peak_valley_dc_samples(x, find_extrema(x, 0.3));
    const double half_period = 0.5 / 0.3;
    for (const auto& d : s) {
        const double ramp = 1.0 + slope * d.index / fs;
        CHECK(std::abs(d.value - ramp) <= half_period * slope);
    }
}

TEST_CASE("default scenario DC samples stay inside the drift range") {
    // A peak taken at a breathing turning point falls short of the full swing,
    // so a few midpoints land slightly outside the drift range.
    std::size_t inside = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        VitalSignScenario sc;
        sc.seed = seed;
        const auto synth = synthesize(sc);
        const auto ch = synth.iq.i();
        const auto s = reject_partial_swings(
            peak_valley_dc_samples(ch, find_extrema(ch, default_prominence(ch))), 0.75);
        REQUIRE(!s.empty());
        for (const auto& d : s) {
            ++total;
            inside += d.value > 1.0 && d.value < 3.0 ? 1 : 0;
            CHECK(d.value > 0.8);
            CHECK(d.value < 3.2);
        }
    }
    CHECK(static_cast<double>(inside) >= 0.99 * static_cast<double>(total));
}

TEST_CASE("windowed DC") {
    const double fs = 20.0;
    const std::size_t n = 1200;
    std::vector<DcSample> constant;
    for (int k = 0; k < 50; ++k) {
        constant.push_back({static_cast<double>(k) * 23.7, 1.75, 1.0});
    }
    const auto w = windowed_dc(constant, WindowSpec{2.0}, n, fs);
    CHECK(w.window_count() == 30);
    for (double v : w.values) {
        CHECK(v == 1.75);
    }
    const auto expanded = w.expand();
    CHECK(expanded.size() == n);

    CHECK(window_count(1200, 20.0, WindowSpec{3.0}) == 20);
    CHECK(window_count(1201, 20.0, WindowSpec{2.0}) == 31);
    CHECK(window_count(1200, 20.0, WindowSpec{4.0}) == 15);

    CHECK_THROWS(windowed_dc(std::vector<DcSample>{}, WindowSpec{2.0}, n, fs));
    CHECK_THROWS_AS(windowed_dc(constant, WindowSpec{0.0}, n, fs), DomainError);
}

TEST_CASE("window means match an exhaustive partition") {
    const double fs = 20.0;
    const std::size_t n = 1200;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(0.0, static_cast<double>(n) - 1.0);
    std::vector<DcSample> samples;
    for (int k = 0; k < 90; ++k) {
        const double idx = pos(rng);
        samples.push_back({idx, 1.0 + idx / 600.0, 1.0});
    }
    for (double length : {1.0, 2.0, 3.0, 4.0, 7.0}) {
        const auto w = windowed_dc(samples, WindowSpec{length}, n, fs);
        const double per = length * fs;
        const auto count = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / per));
        REQUIRE(w.window_count() == count);
        double global = 0.0;
        for (const auto& s : samples) {
            global += s.value;
        }
        global /= static_cast<double>(samples.size());
        double previous = global;
        for (std::size_t k = 0; k < count; ++k) {
            double acc = 0.0;
            int hits = 0;
            for (const auto& s : samples) {
                if (static_cast<std::size_t>(s.index / per) == k) {
                    acc += s.value;
                    ++hits;
                }
            }
            const double expected = hits > 0 ? acc / hits : previous;
            CHECK(std::abs(w.values[k] - expected) < 1e-12);
            previous = expected;
        }
    }
}

TEST_CASE("empty windows inherit the previous value") {
    std::vector<DcSample> samples{{130.0, 5.0, 1.0}, {135.0, 7.0, 1.0}, {700.0, 1.0, 1.0}};
    const auto w = windowed_dc(samples, WindowSpec{2.0}, 1200, 20.0);
    // 40-sample windows: the first two samples land in window 3, the last in 17.
    CHECK(w.values[0] == doctest::Approx(13.0 / 3.0));
    CHECK(w.values[2] == doctest::Approx(13.0 / 3.0));
    CHECK(w.values[3] == 6.0);
    CHECK(w.values[16] == 6.0);
    CHECK(w.values[17] == 1.0);
    CHECK(w.values[29] == 1.0);
}

TEST_CASE("expansion modes") {
    WindowedDc w{2.0, 2.0, {1.0, 3.0}, 80, 20.0, DcExpansion::piecewise_constant, false};
    auto pc = w.expand();
    CHECK(pc[0] == 1.0);
    CHECK(pc[39] == 1.0);
    CHECK(pc[40] == 3.0);
    w.expansion = DcExpansion::linear;
    const auto lin = w.expand();
    CHECK(lin[0] == 1.0);     // held flat before the first center
    CHECK(lin[79] == 3.0);    // and after the last
    for (std::size_t k = 1; k < lin.size(); ++k) {
        CHECK(lin[k] >= lin[k - 1]);
    }
    CHECK(std::abs(lin[39] - 1.0 - 2.0 * (39.0 - 19.5) / 40.0) < 1e-12);
}

TEST_CASE("calibrate subtracts the expanded estimate") {
    const auto synth = synthesize(VitalSignScenario{});
    const auto zero = DcEstimate{constant_dc(0.0, synth.iq.size(), 20.0), constant_dc(0.0, synth.iq.size(), 20.0)};
    const auto same = calibrate(synth.iq, zero);
    for (std::size_t n = 0; n < same.size(); ++n) {
        CHECK(same.i()[n] == synth.iq.i()[n]);
        CHECK(same.q()[n] == synth.iq.q()[n]);
    }

    const auto est = peak_valley_dc(synth.iq);
    const auto once = calibrate(synth.iq, est);
    const auto twice = calibrate(once, zero);
    for (std::size_t n = 0; n < once.size(); ++n) {
        CHECK(once.i()[n] == twice.i()[n]);
    }

    const auto short_zero = DcEstimate{constant_dc(0.0, 10, 20.0), constant_dc(0.0, 10, 20.0)};
    CHECK_THROWS_AS(calibrate(synth.iq, short_zero), DomainError);
}

TEST_CASE("exact DC removal centers a full-period trajectory") {
    const double fs = 20.0;
    const std::size_t n = 400; // 20 s of a 0.25 Hz rotation: 5 full turns
    const auto i = sampled(n, fs, [](double t) { return std::cos(2 * kPi * 0.25 * t) + 2.0; });
    const auto q = sampled(n, fs, [](double t) { return std::sin(2 * kPi * 0.25 * t) + 1.5; });
    const IqSeries iq(i, q, fs);
    const auto c = calibrate(iq, DcEstimate{constant_dc(2.0, n, fs), constant_dc(1.5, n, fs)});
    double mi = 0.0;
    double mq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mi += c.i()[k];
        mq += c.q()[k];
    }
    CHECK(std::hypot(mi, mq) / static_cast<double>(n) < 1e-12);
}

TEST_CASE("peak-valley is exact on grid-aligned stationary sinusoids") {
    const double fs = 20.0;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
    for (double f : {0.2, 0.25, 0.5}) {
        for (double amp : {0.3, 1.0, 4.0}) {
            const double offset = phase(rng);
            const auto x = sampled(1200, fs, [&](double t) { return amp * std::sin(2 * kPi * f * t + offset) - 0.7; });
            PeakValleyOptions opt;
            opt.window = WindowSpec{5.0};
            const auto w = peak_valley_channel_dc(x, fs, opt);
            CHECK_FALSE(w.fallback);
            for (double v : w.values) {
                CHECK(std::abs(v + 0.7) < 1e-9);
            }
        }
    }
}

TEST_CASE("peak-valley estimate does not depend on the amplitude") {
    const double fs = 20.0;
    PeakValleyOptions opt;
    opt.window = WindowSpec{4.0};
    auto estimate = [&](double amp) {
        const auto x = sampled(1200, fs, [&](double t) { return amp * std::sin(2 * kPi * 0.25 * t + 1.1) + 2.0; });
        return peak_valley_channel_dc(x, fs, opt).expand();
    };
    const auto base = estimate(1.0);
    for (double k : {0.05, 0.8, 3.0, 250.0}) {
        const auto scaled = estimate(k);
        for (std::size_t n = 0; n < base.size(); ++n) {
            CHECK(std::abs(scaled[n] - base[n]) < 1e-9);
        }
    }
}

TEST_CASE("constant DC is recovered by the full peak-valley chain") {
    VitalSignScenario s;
    s.dc_i = ConstantDc{2.0};
    s.dc_q = ConstantDc{1.5};
    const auto synth = synthesize(s);
    const auto est = peak_valley_dc(synth.iq);
    for (double v : est.i.expand()) {
        CHECK(std::abs(v - 2.0) < 0.02);
    }
    for (double v : est.q.expand()) {
        CHECK(std::abs(v - 1.5) < 0.02);
    }
}

TEST_CASE("channels without extrema fall back to the record mean") {
    std::vector<double> flat(100, 0.5);
    flat[10] = 0.6;
    const auto ramp = sampled(100, 20.0, [](double t) { return t; });
    const auto w = peak_valley_channel_dc(ramp, 20.0);
    CHECK(w.fallback);
    REQUIRE(w.values.size() == 1);
    CHECK(std::abs(w.values[0] - (99.0 / 20.0) / 2.0) < 1e-12);
}

TEST_CASE("partial swings are rejected") {
    std::vector<DcSample> s{{1, 2.0, 1.0}, {2, 2.1, 0.98}, {3, 5.0, 0.2}, {4, 1.9, 1.02}};
    const auto kept = reject_partial_swings(s, 0.75);
    CHECK(kept.size() == 3);
    CHECK(reject_partial_swings(s, 0.0).size() == 4);
}

TEST_CASE("circle fit through exact points") {
    std::vector<double> i;
    std::vector<double> q;
    for (int k = 0; k < 40; ++k) {
        const double a = 0.3 + 0.11 * k;
        i.push_back(2.0 + 0.8 * std::cos(a));
        q.push_back(1.5 + 0.8 * std::sin(a));
    }
    const auto c = circle_fit(i, q);
    CHECK(std::abs(c.center_i - 2.0) < 1e-9);
    CHECK(std::abs(c.center_q - 1.5) < 1e-9);
    CHECK(std::abs(c.radius - 0.8) < 1e-9);
}

TEST_CASE("circle fit minimizes the algebraic objective") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> angle(0.0, 2.5);
        // 20 dB against a unit-radius circle's per-axis power of 1/2.
        std::normal_distribution<double> noise(0.0, std::sqrt(0.5 / 100.0));
        const std::size_t n = 50 + 30 * seed;
        std::vector<double> i(n), q(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double a = angle(rng);
            i[k] = -1.0 + std::cos(a) + noise(rng);
            q[k] = 0.5 + std::sin(a) + noise(rng);
        }
        const auto c = circle_fit(i, q);
        const auto [oi, oq] = oracle::circle_objective_minimizer(i, q, -1.0, 0.5, 1.0);
        CHECK(std::abs(c.center_i - oi) < 1e-6);
        CHECK(std::abs(c.center_q - oq) < 1e-6);
    }
}

TEST_CASE("degenerate circle fits") {
    CHECK_THROWS_AS(circle_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DegenerateGeometry);
    CHECK_THROWS_AS(circle_fit(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 6, 8}), DegenerateGeometry);
    CHECK_THROWS_AS(circle_fit(std::vector<double>{1, 1, 1}, std::vector<double>{1, 1, 1}), DegenerateGeometry);
}

TEST_CASE("windowed circle fit covers every sample") {
    const auto synth = synthesize(VitalSignScenario{});
    const auto est = circle_fit_windowed_dc(synth.iq, WindowSpec{2.0});
    CHECK(est.i.window_count() == 30);
    CHECK(est.i.expand().size() == synth.iq.size());
    const auto whole = circle_fit_dc(synth.iq);
    CHECK(whole.radius > 0.5);
}

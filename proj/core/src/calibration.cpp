// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vitaliq/errors.hpp"

namespace vitaliq {

namespace {

double samples_per(double seconds, double fs) {
    return seconds * fs;
}

void check_window(WindowSpec window, double fs) {
    if (!(window.length_s > 0.0) || !std::isfinite(window.length_s)) {
        throw DomainError("window length must be > 0");
    }
    if (window.hop_s > window.length_s) {
        throw DomainError("window hop must not exceed the window length");
    }
    if (!(fs > 0.0)) {
        throw DomainError("sample rate must be > 0");
    }
}

} // namespace

std::vector<DcSample> peak_valley_dc_samples(std::span<const double> x, const ExtremaSet& extrema) {
    std::vector<std::size_t> merged;
    merged.reserve(extrema.peaks.size() + extrema.valleys.size());
    std::merge(extrema.peaks.begin(), extrema.peaks.end(), extrema.valleys.begin(),
               extrema.valleys.end(), std::back_inserter(merged));
    for (std::size_t idx : merged) {
        if (idx >= x.size()) {
            throw DomainError("peak_valley_dc_samples: extremum index outside the series");
        }
    }
    std::vector<DcSample> out;
    for (std::size_t k = 1; k < merged.size(); ++k) {
        const double a = x[merged[k - 1]];
        const double b = x[merged[k]];
        out.push_back({
            .index = 0.5 * static_cast<double>(merged[k - 1] + merged[k]),
            .value = 0.5 * (a + b),
            .half_swing = 0.5 * std::abs(a - b),
        });
    }
    if (out.empty()) {
        throw InsufficientExtrema("peak_valley_dc_samples: no adjacent peak/valley pair");
    }
    return out;
}

std::vector<DcSample> reject_partial_swings(std::span<const DcSample> samples, double fraction) {
    if (fraction <= 0.0 || samples.empty()) {
        return {samples.begin(), samples.end()};
    }
    std::vector<double> swings(samples.size());
    std::transform(samples.begin(), samples.end(), swings.begin(),
                   [](const DcSample& s) { return s.half_swing; });
    const double threshold = fraction * percentile(swings, 50.0);
    std::vector<DcSample> out;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(out),
                 [threshold](const DcSample& s) { return s.half_swing >= threshold; });
    return out;
}

double WindowedDc::window_start(std::size_t k) const noexcept {
    return static_cast<double>(k) * samples_per(hop_s, sample_rate_hz);
}

double WindowedDc::window_center(std::size_t k) const noexcept {
    const double start = window_start(k);
    const double end = std::min(start + samples_per(window_length_s, sample_rate_hz),
                                static_cast<double>(num_samples));
    return 0.5 * (start + end) - 0.5;
}

std::vector<double> WindowedDc::expand() const {
    std::vector<double> out(num_samples);
    if (values.empty()) {
        return out;
    }
    if (values.size() == 1) {
        std::fill(out.begin(), out.end(), values.front());
        return out;
    }
    std::vector<double> centers(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        centers[k] = window_center(k);
    }
    std::size_t k = 0;
    for (std::size_t n = 0; n < num_samples; ++n) {
        const double t = static_cast<double>(n);
        while (k + 1 < centers.size() && centers[k + 1] <= t) {
            ++k;
        }
        if (expansion == DcExpansion::piecewise_constant) {
            std::size_t nearest = k;
            if (k + 1 < centers.size() && centers[k + 1] - t < t - centers[k]) {
                nearest = k + 1;
            }
            out[n] = values[nearest];
        } else if (t <= centers.front()) {
            out[n] = values.front();
        } else if (k + 1 >= centers.size()) {
            out[n] = values.back();
        } else {
            const double frac = (t - centers[k]) / (centers[k + 1] - centers[k]);
            out[n] = values[k] + frac * (values[k + 1] - values[k]);
        }
    }
    return out;
}

std::size_t window_count(std::size_t num_samples, double sample_rate_hz, WindowSpec window) {
    const double per = samples_per(window.effective_hop_s(), sample_rate_hz);
    const double ratio = static_cast<double>(num_samples) / per;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio - 1e-9)));
}

WindowedDc windowed_dc(std::span<const DcSample> samples, WindowSpec window, std::size_t num_samples,
                       double sample_rate_hz, DcExpansion expansion) {
    check_window(window, sample_rate_hz);
    if (samples.empty()) {
        throw InsufficientExtrema("windowed_dc: no DC samples");
    }
    WindowedDc out{
        .window_length_s = window.length_s,
        .hop_s = window.effective_hop_s(),
        .values = {},
        .num_samples = num_samples,
        .sample_rate_hz = sample_rate_hz,
        .expansion = expansion,
    };
    const std::size_t count = window_count(num_samples, sample_rate_hz, window);
    const double length = samples_per(window.length_s, sample_rate_hz);
    double global = 0.0;
    for (const auto& s : samples) {
        global += s.value;
    }
    global /= static_cast<double>(samples.size());

    out.values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double start = out.window_start(k);
        double acc = 0.0;
        std::size_t hits = 0;
        for (const auto& s : samples) {
            if (s.index >= start && s.index < start + length) {
                acc += s.value;
                ++hits;
            }
        }
        if (hits > 0) {
            out.values.push_back(acc / static_cast<double>(hits));
        } else {
            out.values.push_back(out.values.empty() ? global : out.values.back());
        }
    }
    return out;
}

WindowedDc constant_dc(double value, std::size_t num_samples, double sample_rate_hz) {
    const double duration = static_cast<double>(num_samples) / sample_rate_hz;
    return WindowedDc{
        .window_length_s = duration,
        .hop_s = duration,
        .values = {value},
        .num_samples = num_samples,
        .sample_rate_hz = sample_rate_hz,
        .expansion = DcExpansion::piecewise_constant,
    };
}

IqSeries calibrate(const IqSeries& iq, const DcEstimate& dc) {
    if (dc.i.num_samples != iq.size() || dc.q.num_samples != iq.size()) {
        throw DomainError("calibrate: DC estimate covers " + std::to_string(dc.i.num_samples) + "/" +
                          std::to_string(dc.q.num_samples) + " samples, record has " +
                          std::to_string(iq.size()));
    }
    const auto di = dc.i.expand();
    const auto dq = dc.q.expand();
    std::vector<double> i(iq.size()), q(iq.size());
    for (std::size_t n = 0; n < iq.size(); ++n) {
        i[n] = iq.i()[n] - di[n];
        q[n] = iq.q()[n] - dq[n];
    }
    return IqSeries(std::move(i), std::move(q), iq.sample_rate_hz());
}

WindowedDc peak_valley_channel_dc(std::span<const double> x, double sample_rate_hz,
                                  const PeakValleyOptions& options) {
    check_window(options.window, sample_rate_hz);
    std::vector<double> smoothed;
    std::span<const double> source = x;
    if (options.smooth && options.smooth_length > 1) {
        smoothed = moving_average(x, options.smooth_length);
        source = smoothed;
    }
    try {
        const double prominence = options.min_prominence.value_or(default_prominence(source));
        const auto extrema = find_extrema(source, prominence);
        auto samples = peak_valley_dc_samples(source, extrema);
        samples = reject_partial_swings(samples, options.swing_reject_fraction);
        return windowed_dc(samples, options.window, x.size(), sample_rate_hz, options.expansion);
    } catch (const InsufficientExtrema&) {
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
        auto out = constant_dc(mean, x.size(), sample_rate_hz);
        out.fallback = true;
        return out;
    }
}

DcEstimate peak_valley_dc(const IqSeries& iq, const PeakValleyOptions& options) {
    return DcEstimate{
        .i = peak_valley_channel_dc(iq.i(), iq.sample_rate_hz(), options),
        .q = peak_valley_channel_dc(iq.q(), iq.sample_rate_hz(), options),
    };
}

} // namespace vitaliq

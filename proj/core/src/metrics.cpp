// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "vitaliq/errors.hpp"

namespace vitaliq {

namespace {

double channel_error(std::span<const double> raw, std::span<const double> calibrated,
                     std::span<const double> dc, const char* name) {
    double peak = 0.0;
    for (double d : dc) {
        peak = std::max(peak, std::abs(d));
    }
    const double eps = 1e-9 * peak;
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t n = 0; n < dc.size(); ++n) {
        if (std::abs(dc[n]) > eps) {
            acc += std::abs(raw[n] - calibrated[n]) / std::abs(dc[n]);
            ++used;
        }
    }
    if (used == 0) {
        throw DomainError(std::string("dc_relative_error: true DC of channel ") + name + " is zero everywhere");
    }
    return acc / static_cast<double>(used);
}

} // namespace

DcRelativeError dc_relative_error(const IqSeries& raw, const IqSeries& calibrated,
                                  std::span<const double> true_dc_i, std::span<const double> true_dc_q) {
    const std::size_t n = raw.size();
    if (calibrated.size() != n || true_dc_i.size() != n || true_dc_q.size() != n) {
        throw DomainError("dc_relative_error: length mismatch");
    }
    return {channel_error(raw.i(), calibrated.i(), true_dc_i, "I"),
            channel_error(raw.q(), calibrated.q(), true_dc_q, "Q")};
}

double displacement_rmse_mm(const PhaseSeries& estimate, const PhaseSeries& truth) {
    if (!estimate.has_displacement() || !truth.has_displacement()) {
        throw DomainError("displacement_rmse: both series need a displacement");
    }
    if (std::abs(estimate.sample_rate_hz - truth.sample_rate_hz) >
        1e-12 * std::max(estimate.sample_rate_hz, truth.sample_rate_hz)) {
        throw DomainError("displacement_rmse: sample rates differ");
    }
    auto r = intersect(estimate.valid, truth.valid);
    r.end = std::min({r.end, estimate.size(), truth.size()});
    if (r.empty()) {
        throw DomainError("displacement_rmse: valid ranges do not overlap");
    }
    const auto& a = estimate.displacement_m;
    const auto& b = truth.displacement_m;
    double mean_diff = 0.0;
    for (std::size_t n = r.begin; n < r.end; ++n) {
        mean_diff += a[n] - b[n];
    }
    mean_diff /= static_cast<double>(r.size());
    double acc = 0.0;
    for (std::size_t n = r.begin; n < r.end; ++n) {
        const double d = a[n] - b[n] - mean_diff;
        acc += d * d;
    }
    return 1e3 * std::sqrt(acc / static_cast<double>(r.size()));
}

SpectrumResult spectrum(std::span<const double> x, double sample_rate_hz) {
    const std::size_t n = x.size();
    if (n < 8) {
        throw DomainError("spectrum: at least 8 samples required");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw DomainError("spectrum: sample rate must be > 0");
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(n);

    std::vector<double> windowed(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / denom);
        windowed[k] = (x[k] - mean) * w;
    }
    const auto bins = detail::fft_real(windowed);

    SpectrumResult out;
    out.resolution_hz = sample_rate_hz / static_cast<double>(n);
    const std::size_t half = n / 2 + 1;
    out.freq_hz.resize(half);
    out.amplitude_norm.resize(half);
    double peak = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
        out.freq_hz[k] = out.resolution_hz * static_cast<double>(k);
        out.amplitude_norm[k] = std::abs(bins[k]);
        peak = std::max(peak, out.amplitude_norm[k]);
    }
    if (!(peak > 0.0)) {
        throw DomainError("spectrum: input is constant");
    }
    for (double& a : out.amplitude_norm) {
        a /= peak;
    }
    return out;
}

SpectrumResult spectrum(const PhaseSeries& series) {
    const auto r = series.valid;
    return spectrum(std::span<const double>(series.phase_rad).subspan(r.begin, r.size()), series.sample_rate_hz);
}

double estimate_rate_bpm(std::span<const double> x, double sample_rate_hz, Band band) {
    if (!(band.low_hz > 0.0) || !(band.high_hz > band.low_hz) || !(band.high_hz < 0.5 * sample_rate_hz)) {
        throw DomainError("estimate_rate: band must satisfy 0 < low < high < Nyquist");
    }
    const double duration = static_cast<double>(x.size()) / sample_rate_hz;
    if (duration < 3.0 / band.low_hz) {
        throw DomainError("estimate_rate: record of " + std::to_string(duration) +
                          " s is shorter than 3 periods of the band's low edge");
    }
    const auto s = spectrum(x, sample_rate_hz);
    std::size_t best = s.freq_hz.size();
    for (std::size_t k = 0; k < s.freq_hz.size(); ++k) {
        if (s.freq_hz[k] >= band.low_hz && s.freq_hz[k] <= band.high_hz &&
            (best == s.freq_hz.size() || s.amplitude_norm[k] > s.amplitude_norm[best])) {
            best = k;
        }
    }
    if (best == s.freq_hz.size()) {
        throw DomainError("estimate_rate: no spectral bin inside the band");
    }
    double offset = 0.0;
    if (best > 0 && best + 1 < s.freq_hz.size()) {
        const double a = s.amplitude_norm[best - 1];
        const double b = s.amplitude_norm[best];
        const double c = s.amplitude_norm[best + 1];
        const double curvature = a - 2.0 * b + c;
        if (curvature < 0.0) {
            offset = std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
        }
    }
    return 60.0 * (s.freq_hz[best] + offset * s.resolution_hz);
}

double estimate_rate_bpm(const PhaseSeries& series, Band band) {
    const auto r = series.valid;
    return estimate_rate_bpm(std::span<const double>(series.phase_rad).subspan(r.begin, r.size()),
                             series.sample_rate_hz, band);
}

} // namespace vitaliq

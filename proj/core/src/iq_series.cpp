// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/iq_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vitaliq/errors.hpp"

namespace vitaliq {

IndexRange intersect(IndexRange a, IndexRange b) noexcept {
    IndexRange r{std::max(a.begin, b.begin), std::min(a.end, b.end)};
    if (r.end < r.begin) {
        r.end = r.begin;
    }
    return r;
}

IqSeries::IqSeries(std::vector<double> i, std::vector<double> q, double sample_rate_hz)
    : i_(std::move(i)), q_(std::move(q)), sample_rate_hz_(sample_rate_hz) {
    if (i_.size() != q_.size()) {
        throw DomainError("IqSeries: I and Q lengths differ (" + std::to_string(i_.size()) +
                          " vs " + std::to_string(q_.size()) + ")");
    }
    if (i_.size() < 2) {
        throw DomainError("IqSeries: at least 2 samples required");
    }
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
        throw DomainError("IqSeries: sample rate must be positive and finite");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(i_.begin(), i_.end(), finite) || !std::all_of(q_.begin(), q_.end(), finite)) {
        throw DomainError("IqSeries: non-finite sample");
    }
}

double phase_to_displacement(double phase_rad, double wavelength_m) noexcept {
    return wavelength_m * phase_rad / (4.0 * std::numbers::pi);
}

PhaseSeries make_phase_series(std::vector<double> phase_rad, double sample_rate_hz,
                              IndexRange valid, double wavelength_m) {
    PhaseSeries out;
    out.phase_rad = std::move(phase_rad);
    out.sample_rate_hz = sample_rate_hz;
    out.valid = intersect(valid, IndexRange{0, out.phase_rad.size()});
    if (wavelength_m > 0.0) {
        out.displacement_m.resize(out.phase_rad.size());
        std::transform(out.phase_rad.begin(), out.phase_rad.end(), out.displacement_m.begin(),
                       [wavelength_m](double p) { return phase_to_displacement(p, wavelength_m); });
    }
    return out;
}

} // namespace vitaliq

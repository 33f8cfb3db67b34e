// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vitaliq {

/// Half-open sample range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
    bool empty() const noexcept { return size() == 0; }
    bool contains(std::size_t n) const noexcept { return n >= begin && n < end; }
};

IndexRange intersect(IndexRange a, IndexRange b) noexcept;

/// Uniformly sampled two-channel baseband record.
///
/// Construction enforces the record invariants: equal channel lengths of at
/// least two samples, a positive sample rate and finite samples. Instances are
/// immutable afterwards.
class IqSeries {
public:
    IqSeries(std::vector<double> i, std::vector<double> q, double sample_rate_hz);

    std::span<const double> i() const noexcept { return i_; }
    std::span<const double> q() const noexcept { return q_; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    double dt() const noexcept { return 1.0 / sample_rate_hz_; }
    std::size_t size() const noexcept { return i_.size(); }

private:
    std::vector<double> i_;
    std::vector<double> q_;
    double sample_rate_hz_;
};

/// Demodulated phase p(t) with its chest-displacement equivalent.
struct PhaseSeries {
    std::vector<double> phase_rad;
    /// lambda * phase / (4 pi); empty when no wavelength is attached.
    std::vector<double> displacement_m;
    double sample_rate_hz = 0.0;
    /// Samples free of edge effects. Every metric restricts itself to this range.
    IndexRange valid;

    std::size_t size() const noexcept { return phase_rad.size(); }
    bool has_displacement() const noexcept { return !displacement_m.empty(); }
};

double phase_to_displacement(double phase_rad, double wavelength_m) noexcept;

/// Builds a PhaseSeries, filling displacement_m when wavelength_m > 0.
PhaseSeries make_phase_series(std::vector<double> phase_rad, double sample_rate_hz,
                              IndexRange valid, double wavelength_m);

} // namespace vitaliq

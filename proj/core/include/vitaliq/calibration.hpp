// SPDX-License-Identifier: Apache-2.0
#pragma once

// Time-varying DC offset estimation and removal.
//
// Peak-valley method: at a local maximum a channel sits at +A + DC and at a
// local minimum at -A + DC, so the midpoint of an adjacent peak/valley pair
// is a DC sample independent of A. Samples are averaged over windows and the
// window values are expanded back to one estimate per record sample.
//
// Circle fitting is the baseline: the algebraic (Kasa) least-squares circle
// through the (I, Q) scatter, whose center is taken as (DC_I, DC_Q).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vitaliq/iq_series.hpp"

namespace vitaliq {

/// Alternating local extrema of one channel.
struct ExtremaSet {
    std::vector<std::size_t> peaks;
    std::vector<std::size_t> valleys;
};

/// Local maxima/minima whose topographic prominence is at least
/// min_prominence. Runs of same-type extrema are reduced to the most extreme
/// member so peaks and valleys alternate. Throws InsufficientExtrema when no
/// peak or no valley survives.
ExtremaSet find_extrema(std::span<const double> x, double min_prominence);

/// Linear-interpolated percentile, p in [0, 100].
double percentile(std::span<const double> x, double p);

/// 90th minus 10th percentile.
double robust_range(std::span<const double> x);

/// 0.3 * robust_range(x).
double default_prominence(std::span<const double> x);

/// Centered moving average; the window shrinks symmetrically at the edges.
std::vector<double> moving_average(std::span<const double> x, std::size_t length);

struct DcSample {
    /// Midpoint of the pair in (possibly fractional) sample-index units.
    double index = 0.0;
    /// (peak + valley) / 2
    double value = 0.0;
    /// |peak - valley| / 2, i.e. the channel amplitude seen by this pair.
    double half_swing = 0.0;
};

/// One DC sample per consecutive alternating extremum pair (both peak->valley
/// and valley->peak orderings). Throws InsufficientExtrema when no pair exists.
std::vector<DcSample> peak_valley_dc_samples(std::span<const double> x, const ExtremaSet& extrema);

/// Drops pairs whose half swing is below fraction * median half swing. Such
/// pairs straddle a turning point of the phase rather than a full +A/-A
/// excursion. fraction <= 0 keeps everything.
std::vector<DcSample> reject_partial_swings(std::span<const DcSample> samples, double fraction);

enum class DcExpansion {
    /// Linear interpolation between window centers, held flat beyond the outer centers.
    linear,
    /// Each sample takes the value of the nearest window center.
    piecewise_constant,
};

struct WindowSpec {
    double length_s = 2.0;
    /// Window advance; <= 0 means hop == length (non-overlapping).
    double hop_s = 0.0;

    double effective_hop_s() const noexcept { return hop_s > 0.0 ? hop_s : length_s; }
};

/// Windowed DC estimate for one channel.
struct WindowedDc {
    double window_length_s = 0.0;
    double hop_s = 0.0;
    std::vector<double> values;
    std::size_t num_samples = 0;
    double sample_rate_hz = 0.0;
    DcExpansion expansion = DcExpansion::linear;
    /// Set when the estimate degraded to the whole-record mean.
    bool fallback = false;

    std::size_t window_count() const noexcept { return values.size(); }
    /// First sample index covered by window k.
    double window_start(std::size_t k) const noexcept;
    /// Center of window k in sample-index units (clipped to the record).
    double window_center(std::size_t k) const noexcept;
    /// Per-sample DC, exactly num_samples entries.
    std::vector<double> expand() const;
};

/// Window count for a record: ceil(num_samples / (hop_s * sample_rate_hz)).
std::size_t window_count(std::size_t num_samples, double sample_rate_hz, WindowSpec window);

/// Averages the DC samples whose midpoint falls in each window. Empty windows
/// inherit the previous window's value; a leading empty window takes the
/// global mean of all samples.
WindowedDc windowed_dc(std::span<const DcSample> samples, WindowSpec window, std::size_t num_samples,
                       double sample_rate_hz, DcExpansion expansion = DcExpansion::linear);

/// Constant estimate (single window spanning the record).
WindowedDc constant_dc(double value, std::size_t num_samples, double sample_rate_hz);

struct DcEstimate {
    WindowedDc i;
    WindowedDc q;
};

/// Subtracts the expanded estimate of each channel.
IqSeries calibrate(const IqSeries& iq, const DcEstimate& dc);

struct PeakValleyOptions {
    WindowSpec window{};
    /// nullopt: default_prominence() of the (possibly smoothed) channel.
    std::optional<double> min_prominence;
    /// Moving-average pre-smoothing before extrema detection; DC samples are
    /// read from the smoothed series.
    bool smooth = false;
    std::size_t smooth_length = 5;
    double swing_reject_fraction = 0.75;
    DcExpansion expansion = DcExpansion::linear;
};

/// Full peak-valley estimate for one channel. Falls back to the whole-record
/// mean (fallback = true) when the channel has insufficient extrema.
WindowedDc peak_valley_channel_dc(std::span<const double> x, double sample_rate_hz,
                                  const PeakValleyOptions& options = {});

DcEstimate peak_valley_dc(const IqSeries& iq, const PeakValleyOptions& options = {});

struct CircleFit {
    double center_i = 0.0;
    double center_q = 0.0;
    double radius = 0.0;
};

/// Algebraic least-squares circle: minimizes sum((|s - c|^2 - r^2)^2) through
/// its linear normal equations. Throws DegenerateGeometry for fewer than three
/// points or a collinear scatter.
CircleFit circle_fit(std::span<const double> i, std::span<const double> q);

CircleFit circle_fit_dc(const IqSeries& iq);

/// Circle fit per window; window values are expanded like the peak-valley estimate.
DcEstimate circle_fit_windowed_dc(const IqSeries& iq, WindowSpec window,
                                  DcExpansion expansion = DcExpansion::linear);

} // namespace vitaliq

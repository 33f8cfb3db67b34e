// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <optional>

#include "vitaliq/calibration.hpp"
#include "vitaliq/errors.hpp"

namespace vitaliq {

CircleFit circle_fit(std::span<const double> i, std::span<const double> q) {
    if (i.size() != q.size()) {
        throw DomainError("circle_fit: I and Q lengths differ");
    }
    const std::size_t n = i.size();
    if (n < 3) {
        throw DegenerateGeometry("circle_fit: at least 3 points required");
    }
    double mi = 0.0;
    double mq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mi += i[k];
        mq += q[k];
    }
    mi /= static_cast<double>(n);
    mq /= static_cast<double>(n);

    // Centered Kasa normal equations:
    //   [Suu Suv] [uc]   1 [Suuu + Suvv]
    //   [Suv Svv] [vc] = - [Svvv + Svuu]
    //                    2
    double suu = 0.0, svv = 0.0, suv = 0.0, suuu = 0.0, svvv = 0.0, suvv = 0.0, svuu = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = i[k] - mi;
        const double v = q[k] - mq;
        suu += u * u;
        svv += v * v;
        suv += u * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    const double det = suu * svv - suv * suv;
    const double scale = suu * svv;
    if (!(scale > 0.0) || !(std::abs(det) > 1e-12 * scale)) {
        throw DegenerateGeometry("circle_fit: collinear or coincident points");
    }
    const double bu = 0.5 * (suuu + suvv);
    const double bv = 0.5 * (svvv + svuu);
    const double uc = (bu * svv - bv * suv) / det;
    const double vc = (suu * bv - suv * bu) / det;
    const double r2 = uc * uc + vc * vc + (suu + svv) / static_cast<double>(n);
    return CircleFit{.center_i = uc + mi, .center_q = vc + mq, .radius = std::sqrt(r2)};
}

CircleFit circle_fit_dc(const IqSeries& iq) {
    return circle_fit(iq.i(), iq.q());
}

DcEstimate circle_fit_windowed_dc(const IqSeries& iq, WindowSpec window, DcExpansion expansion) {
    if (!(window.length_s > 0.0) || window.hop_s > window.length_s) {
        throw DomainError("circle_fit_windowed_dc: invalid window");
    }
    const double fs = iq.sample_rate_hz();
    const std::size_t n = iq.size();
    const std::size_t count = window_count(n, fs, window);
    WindowedDc wi{
        .window_length_s = window.length_s,
        .hop_s = window.effective_hop_s(),
        .values = {},
        .num_samples = n,
        .sample_rate_hz = fs,
        .expansion = expansion,
    };
    WindowedDc wq = wi;
    const double length = window.length_s * fs;
    // A degenerate window (too short or collinear) inherits its neighbour's
    // center, mirroring how empty peak-valley windows are handled.
    std::vector<std::optional<CircleFit>> fits(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double start = wi.window_start(k);
        const auto first = std::min(n, static_cast<std::size_t>(std::ceil(start)));
        const auto last = std::min(n, static_cast<std::size_t>(std::ceil(start + length)));
        try {
            fits[k] = circle_fit(iq.i().subspan(first, last - first), iq.q().subspan(first, last - first));
        } catch (const DegenerateGeometry&) {
        }
    }
    const auto first_ok = std::find_if(fits.begin(), fits.end(), [](const auto& f) { return f.has_value(); });
    if (first_ok == fits.end()) {
        throw DegenerateGeometry("circle_fit_windowed_dc: every window is degenerate");
    }
    CircleFit last_fit = **first_ok;
    for (const auto& f : fits) {
        if (f) {
            last_fit = *f;
        }
        wi.values.push_back(last_fit.center_i);
        wq.values.push_back(last_fit.center_q);
    }
    return DcEstimate{.i = std::move(wi), .q = std::move(wq)};
}

} // namespace vitaliq

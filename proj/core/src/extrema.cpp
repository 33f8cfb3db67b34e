// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "vitaliq/calibration.hpp"
#include "vitaliq/errors.hpp"

namespace vitaliq {

namespace {

// Local maxima; a flat top counts once, at its middle sample. Endpoints are
// never maxima.
std::vector<std::size_t> local_maxima(std::span<const double> x) {
    std::vector<std::size_t> out;
    const std::size_t n = x.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (x[i - 1] < x[i]) {
            std::size_t ahead = i + 1;
            while (ahead + 1 < n && x[ahead] == x[i]) {
                ++ahead;
            }
            if (x[ahead] < x[i]) {
                out.push_back((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        ++i;
    }
    return out;
}

double prominence(std::span<const double> x, std::size_t peak) {
    const double h = x[peak];
    double left_min = h;
    for (std::size_t j = peak; j-- > 0;) {
        if (x[j] > h) {
            break;
        }
        left_min = std::min(left_min, x[j]);
    }
    double right_min = h;
    for (std::size_t j = peak + 1; j < x.size(); ++j) {
        if (x[j] > h) {
            break;
        }
        right_min = std::min(right_min, x[j]);
    }
    return h - std::max(left_min, right_min);
}

std::vector<std::size_t> prominent_maxima(std::span<const double> x, double min_prominence) {
    std::vector<std::size_t> out;
    for (std::size_t p : local_maxima(x)) {
        if (prominence(x, p) >= min_prominence) {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace

ExtremaSet find_extrema(std::span<const double> x, double min_prominence) {
    if (x.size() < 3) {
        throw DomainError("find_extrema: at least 3 samples required");
    }
    if (!(min_prominence >= 0.0)) {
        throw DomainError("find_extrema: min_prominence must be >= 0");
    }
    const auto peaks = prominent_maxima(x, min_prominence);
    std::vector<double> negated(x.size());
    std::transform(x.begin(), x.end(), negated.begin(), [](double v) { return -v; });
    const auto valleys = prominent_maxima(negated, min_prominence);

    struct Event {
        std::size_t index;
        bool peak;
    };
    std::vector<Event> merged;
    merged.reserve(peaks.size() + valleys.size());
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < peaks.size() || b < valleys.size()) {
        if (b == valleys.size() || (a < peaks.size() && peaks[a] < valleys[b])) {
            merged.push_back({peaks[a++], true});
        } else {
            merged.push_back({valleys[b++], false});
        }
    }

    // Enforce alternation: of consecutive same-type events keep the most extreme.
    std::vector<Event> alternating;
    for (const Event& e : merged) {
        if (!alternating.empty() && alternating.back().peak == e.peak) {
            Event& last = alternating.back();
            const bool more_extreme = e.peak ? x[e.index] > x[last.index] : x[e.index] < x[last.index];
            if (more_extreme) {
                last = e;
            }
            continue;
        }
        alternating.push_back(e);
    }

    ExtremaSet out;
    for (const Event& e : alternating) {
        (e.peak ? out.peaks : out.valleys).push_back(e.index);
    }
    if (out.peaks.empty() || out.valleys.empty()) {
        throw InsufficientExtrema("find_extrema: found " + std::to_string(out.peaks.size()) +
                                  " peak(s) and " + std::to_string(out.valleys.size()) +
                                  " valley(s); need at least one of each");
    }
    return out;
}

double percentile(std::span<const double> x, double p) {
    if (x.empty()) {
        throw DomainError("percentile: empty input");
    }
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double robust_range(std::span<const double> x) {
    return percentile(x, 90.0) - percentile(x, 10.0);
}

double default_prominence(std::span<const double> x) {
    return 0.3 * robust_range(x);
}

std::vector<double> moving_average(std::span<const double> x, std::size_t length) {
    std::vector<double> out(x.size());
    const std::size_t half = length / 2;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const std::size_t reach = std::min({half, n, x.size() - 1 - n});
        double acc = 0.0;
        for (std::size_t j = n - reach; j <= n + reach; ++j) {
            acc += x[j];
        }
        out[n] = acc / static_cast<double>(2 * reach + 1);
    }
    return out;
}

} // namespace vitaliq

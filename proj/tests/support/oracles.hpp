// SPDX-License-Identifier: Apache-2.0
#pragma once

// Slow reference implementations used to check the library. They follow the
// textbook definitions directly and share no code with vitaliq.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle {

constexpr double kPi = std::numbers::pi;

/// Imaginary part of the analytic signal via an O(N^2) DFT.
inline std::vector<double> hilbert_dft(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> spec(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double a = -2.0 * kPi * static_cast<double>((k * m) % n) / static_cast<double>(n);
            acc += x[m] * std::complex<double>(std::cos(a), std::sin(a));
        }
        double h = 0.0;
        if (k == 0 || (n % 2 == 0 && k == n / 2)) {
            h = 1.0;
        } else if (k < (n + 1) / 2) {
            h = 2.0;
        }
        spec[k] = acc * h;
    }
    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = 2.0 * kPi * static_cast<double>((k * m) % n) / static_cast<double>(n);
            acc += spec[k] * std::complex<double>(std::cos(a), std::sin(a));
        }
        out[m] = acc.imag() / static_cast<double>(n);
    }
    return out;
}

/// Strict local maxima whose prominence (found by walking left and right until
/// a higher sample or the boundary) is at least min_prominence.
inline std::vector<std::size_t> prominent_peaks(std::span<const double> x, double min_prominence) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (!(x[i] > x[i - 1] && x[i] > x[i + 1])) {
            continue;
        }
        double left_min = x[i];
        for (std::size_t j = i; j-- > 0;) {
            if (x[j] > x[i]) {
                break;
            }
            left_min = std::min(left_min, x[j]);
        }
        double right_min = x[i];
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (x[j] > x[i]) {
                break;
            }
            right_min = std::min(right_min, x[j]);
        }
        if (x[i] - std::max(left_min, right_min) >= min_prominence) {
            out.push_back(i);
        }
    }
    return out;
}

inline std::vector<std::size_t> prominent_valleys(std::span<const double> x, double min_prominence) {
    std::vector<double> neg(x.begin(), x.end());
    for (double& v : neg) {
        v = -v;
    }
    return prominent_peaks(neg, min_prominence);
}

/// Unwrap by picking, for every step, the extra 2 pi k (k in -2..2) on top of
/// the previous correction that makes the jump from the previous sample smallest.
inline std::vector<double> unwrap_search(std::span<const double> a) {
    std::vector<double> out(a.begin(), a.end());
    long turns = 0;
    for (std::size_t n = 1; n < a.size(); ++n) {
        long best_k = 0;
        double best_jump = INFINITY;
        for (long k = -2; k <= 2; ++k) {
            const double jump = std::abs(a[n] + 2.0 * kPi * static_cast<double>(turns + k) - out[n - 1]);
            if (jump < best_jump) {
                best_jump = jump;
                best_k = k;
            }
        }
        turns += best_k;
        out[n] = a[n] + 2.0 * kPi * static_cast<double>(turns);
    }
    return out;
}

/// Magnitude of the Hann-windowed, mean-removed DTFT at frequency f.
inline double windowed_dtft(std::span<const double> x, double fs, double f) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(m) / static_cast<double>(n - 1));
        const double a = -2.0 * kPi * f * static_cast<double>(m) / fs;
        acc += (x[m] - mean) * w * std::complex<double>(std::cos(a), std::sin(a));
    }
    return std::abs(acc);
}

/// Frequency maximizing windowed_dtft over [lo, hi] on a fine grid.
inline double dense_peak_hz(std::span<const double> x, double fs, double lo, double hi, double step) {
    double best_f = lo;
    double best = -1.0;
    for (double f = lo; f <= hi; f += step) {
        const double v = windowed_dtft(x, fs, f);
        if (v > best) {
            best = v;
            best_f = f;
        }
    }
    return best_f;
}

/// Minimizer of sum((|s - c|^2 - r^2)^2) over (c, r) by coarse grid search
/// around (ci, cq) followed by shrinking pattern refinement. For a fixed c the
/// optimal r^2 is the mean of |s - c|^2.
inline std::pair<double, double> circle_objective_minimizer(std::span<const double> i, std::span<const double> q,
                                                            double ci, double cq, double span) {
    auto objective = [&](double a, double b) {
        double mean = 0.0;
        for (std::size_t n = 0; n < i.size(); ++n) {
            mean += (i[n] - a) * (i[n] - a) + (q[n] - b) * (q[n] - b);
        }
        mean /= static_cast<double>(i.size());
        double acc = 0.0;
        for (std::size_t n = 0; n < i.size(); ++n) {
            const double d = (i[n] - a) * (i[n] - a) + (q[n] - b) * (q[n] - b) - mean;
            acc += d * d;
        }
        return acc;
    };
    double best_a = ci;
    double best_b = cq;
    double best = objective(ci, cq);
    const int steps = 40;
    for (int u = -steps; u <= steps; ++u) {
        for (int v = -steps; v <= steps; ++v) {
            const double a = ci + span * u / steps;
            const double b = cq + span * v / steps;
            const double o = objective(a, b);
            if (o < best) {
                best = o;
                best_a = a;
                best_b = b;
            }
        }
    }
    for (double h = span / steps; h > 1e-10; h *= 0.5) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (auto [da, db] : {std::pair{h, 0.0}, std::pair{-h, 0.0}, std::pair{0.0, h}, std::pair{0.0, -h}}) {
                const double o = objective(best_a + da, best_b + db);
                if (o < best) {
                    best = o;
                    best_a += da;
                    best_b += db;
                    moved = true;
                }
            }
        }
    }
    return {best_a, best_b};
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> out(n);
    for (double& v : out) {
        v = dist(rng);
    }
    return out;
}

} // namespace oracle

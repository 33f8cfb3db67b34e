// SPDX-License-Identifier: Apache-2.0
#include "vitaliq/demod.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fft.hpp"
#include "vitaliq/calibration.hpp"
#include "vitaliq/errors.hpp"

namespace vitaliq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> derivative(std::span<const double> x, double dt, DerivativeScheme scheme) {
    return scheme == DerivativeScheme::spectral ? spectral_derivative(x, dt) : differentiate(x, dt);
}

double mean_power(std::span<const double> i, std::span<const double> q, IndexRange r) {
    double acc = 0.0;
    for (std::size_t n = r.begin; n < r.end; ++n) {
        acc += i[n] * i[n] + q[n] * q[n];
    }
    return r.empty() ? 0.0 : acc / static_cast<double>(r.size());
}

// Integrates a phase rate with the trapezoidal rule, anchored so that
// phase[valid.begin] == 0. Non-finite rates outside the valid range are
// treated as zero so they cannot leak into it.
PhaseSeries integrate_rate(std::vector<double> rate, double fs, IndexRange valid, double wavelength_m) {
    for (std::size_t n = 0; n < rate.size(); ++n) {
        if (!valid.contains(n) && !std::isfinite(rate[n])) {
            rate[n] = 0.0;
        }
    }
    const double dt = 1.0 / fs;
    std::vector<double> phase(rate.size(), 0.0);
    for (std::size_t n = valid.begin + 1; n < rate.size(); ++n) {
        phase[n] = phase[n - 1] + 0.5 * dt * (rate[n - 1] + rate[n]);
    }
    for (std::size_t n = valid.begin; n-- > 0;) {
        phase[n] = phase[n + 1] - 0.5 * dt * (rate[n + 1] + rate[n]);
    }
    return make_phase_series(std::move(phase), fs, valid, wavelength_m);
}

PhaseSeries anchored(std::vector<double> phase, double fs, IndexRange valid, double wavelength_m) {
    const double offset = phase[valid.begin];
    for (double& p : phase) {
        p -= offset;
    }
    return make_phase_series(std::move(phase), fs, valid, wavelength_m);
}

double weighted_median(std::vector<std::pair<double, double>>& value_weight) {
    std::sort(value_weight.begin(), value_weight.end());
    double total = 0.0;
    for (const auto& vw : value_weight) {
        total += vw.second;
    }
    if (!(total > 0.0)) {
        return 0.0;
    }
    double acc = 0.0;
    for (const auto& [value, weight] : value_weight) {
        acc += weight;
        if (acc >= 0.5 * total) {
            return value;
        }
    }
    return value_weight.back().first;
}

void check_wavelength(double wavelength_m) {
    if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
        throw DomainError("wavelength must be > 0");
    }
}

} // namespace

std::vector<double> hilbert(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) {
        throw DomainError("hilbert: at least 4 samples required");
    }
    auto spectrum = detail::fft_real(x);
    // Keep DC (and Nyquist for even n), double positive bins, zero negative bins.
    const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
    for (std::size_t k = 1; k < positive_end; ++k) {
        spectrum[k] *= 2.0;
    }
    for (std::size_t k = (n % 2 == 0) ? n / 2 + 1 : positive_end; k < n; ++k) {
        spectrum[k] = 0.0;
    }
    const auto analytic = detail::ifft(spectrum);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = analytic[k].imag();
    }
    return out;
}

std::vector<double> differentiate(std::span<const double> x, double dt) {
    if (x.size() < 3) {
        throw DomainError("differentiate: at least 3 samples required");
    }
    if (!(dt > 0.0)) {
        throw DomainError("differentiate: dt must be > 0");
    }
    const std::size_t n = x.size();
    std::vector<double> out(n);
    out[0] = (x[1] - x[0]) / dt;
    out[n - 1] = (x[n - 1] - x[n - 2]) / dt;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        out[k] = (x[k + 1] - x[k - 1]) / (2.0 * dt);
    }
    return out;
}

std::vector<double> spectral_derivative(std::span<const double> x, double dt) {
    if (x.size() < 3) {
        throw DomainError("spectral_derivative: at least 3 samples required");
    }
    if (!(dt > 0.0)) {
        throw DomainError("spectral_derivative: dt must be > 0");
    }
    const std::size_t n = x.size();
    const std::size_t m = 2 * n;
    std::vector<double> mirrored(m);
    std::copy(x.begin(), x.end(), mirrored.begin());
    std::reverse_copy(x.begin(), x.end(), mirrored.begin() + static_cast<std::ptrdiff_t>(n));

    auto spectrum = detail::fft_real(mirrored);
    const double base = kTwoPi / (static_cast<double>(m) * dt);
    for (std::size_t k = 0; k < m; ++k) {
        double omega = 0.0;
        if (k < m / 2) {
            omega = base * static_cast<double>(k);
        } else if (k > m / 2) {
            omega = -base * static_cast<double>(m - k);
        }
        spectrum[k] *= detail::cplx(0.0, omega);
    }
    const auto back = detail::ifft(spectrum);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = back[k].real();
    }
    return out;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, double dt) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t k = 1; k < x.size(); ++k) {
        out[k] = out[k - 1] + 0.5 * dt * (x[k - 1] + x[k]);
    }
    return out;
}

std::vector<double> unwrap(std::span<const double> angles) {
    std::vector<double> out(angles.begin(), angles.end());
    double correction = 0.0;
    for (std::size_t k = 1; k < angles.size(); ++k) {
        const double d = angles[k] - angles[k - 1];
        double wrapped = std::fmod(d + kPi, kTwoPi);
        if (wrapped < 0.0) {
            wrapped += kTwoPi;
        }
        wrapped -= kPi;
        if (wrapped == -kPi && d > 0.0) {
            wrapped = kPi;
        }
        if (std::abs(d) >= kPi) {
            correction += wrapped - d;
        }
        out[k] = angles[k] + correction;
    }
    return out;
}

IndexRange trimmed_range(std::size_t n, double sample_rate_hz, double trim_s) {
    const auto trim = static_cast<std::size_t>(std::ceil(std::max(trim_s, 0.0) * sample_rate_hz - 1e-9));
    if (2 * trim >= n) {
        throw DomainError("record of " + std::to_string(n) + " samples is shorter than twice the " +
                          std::to_string(trim_s) + " s edge trim");
    }
    return IndexRange{trim, n - trim};
}

HadcmTerms hadcm_terms(const IqSeries& calibrated, const DemodOptions& options) {
    const auto i = calibrated.i();
    const auto q = calibrated.q();
    const std::size_t n = calibrated.size();
    if (n < 4) {
        throw DomainError("hadcm: at least 4 samples required");
    }
    const double dt = calibrated.dt();
    const auto di = derivative(i, dt, options.derivative);
    const auto dq = derivative(q, dt, options.derivative);
    const auto ih = hilbert(i);
    const auto qh = hilbert(q);

    HadcmTerms t;
    t.valid = trimmed_range(n, calibrated.sample_rate_hz(), options.edge_trim_s);
    t.numerator.resize(n);
    t.raw_denominator.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        t.numerator[k] = i[k] * dq[k] - q[k] * di[k];
        t.raw_denominator[k] = ih[k] * q[k] - i[k] * qh[k];
    }

    if (options.denominator == DenominatorMode::pointwise) {
        t.denominator = t.raw_denominator;
        return t;
    }

    // The cross term equals A_I A_Q cos(phi_I - phi_Q) only where the phase is
    // moving; it flips sign with the direction of motion and collapses near
    // turning points. Aligning it with the numerator's sign and weighting by
    // |numerator| keeps the samples where the Hilbert quadrature holds.
    auto window_median = [&](std::size_t lo, std::size_t hi) {
        std::vector<std::pair<double, double>> vw;
        vw.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            const double sign = t.numerator[k] < 0.0 ? -1.0 : 1.0;
            vw.emplace_back(sign * t.raw_denominator[k], std::abs(t.numerator[k]));
        }
        return weighted_median(vw);
    };
    t.denominator.assign(n, 0.0);
    if (options.denominator_window_s <= 0.0) {
        std::fill(t.denominator.begin(), t.denominator.end(), window_median(t.valid.begin, t.valid.end));
        return t;
    }
    const auto half = static_cast<std::size_t>(
        std::llround(0.5 * options.denominator_window_s * calibrated.sample_rate_hz()));
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t center = std::clamp(k, t.valid.begin, t.valid.end - 1);
        const std::size_t lo = center > t.valid.begin + half ? center - half : t.valid.begin;
        const std::size_t hi = std::min(t.valid.end, center + half + 1);
        t.denominator[k] = window_median(lo, hi);
    }
    return t;
}

PhaseSeries hadcm(const IqSeries& calibrated, double wavelength_m, const DemodOptions& options) {
    check_wavelength(wavelength_m);
    const auto terms = hadcm_terms(calibrated, options);
    const double eps = 1e-9 * mean_power(calibrated.i(), calibrated.q(), terms.valid);
    std::vector<double> rate(calibrated.size());
    for (std::size_t k = 0; k < rate.size(); ++k) {
        const double den = terms.denominator[k];
        if (terms.valid.contains(k) && !(std::abs(den) > eps)) {
            throw DegenerateQuadrature("hadcm: degenerate quadrature (denominator " + std::to_string(den) +
                                       " at sample " + std::to_string(k) + ")");
        }
        rate[k] = terms.numerator[k] / den;
    }
    return integrate_rate(std::move(rate), calibrated.sample_rate_hz(), terms.valid, wavelength_m);
}

PhaseSeries atan_demod(const IqSeries& iq, double wavelength_m, const DemodOptions& options) {
    check_wavelength(wavelength_m);
    const auto valid = trimmed_range(iq.size(), iq.sample_rate_hz(), options.edge_trim_s);
    std::vector<double> raw(iq.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (iq.i()[k] == 0.0 && iq.q()[k] == 0.0) {
            throw DegenerateQuadrature("atan_demod: sample " + std::to_string(k) + " is at the origin");
        }
        raw[k] = std::atan2(iq.q()[k], iq.i()[k]);
    }
    return anchored(unwrap(raw), iq.sample_rate_hz(), valid, wavelength_m);
}

PhaseSeries mdacm_demod(const IqSeries& iq, double wavelength_m, const DemodOptions& options) {
    check_wavelength(wavelength_m);
    if (iq.size() < 3) {
        throw DomainError("mdacm_demod: at least 3 samples required");
    }
    const auto valid = trimmed_range(iq.size(), iq.sample_rate_hz(), options.edge_trim_s);
    const auto i = iq.i();
    const auto q = iq.q();
    const auto di = derivative(i, iq.dt(), options.derivative);
    const auto dq = derivative(q, iq.dt(), options.derivative);
    const double eps = 1e-12 * mean_power(i, q, IndexRange{0, iq.size()});
    std::vector<double> rate(iq.size());
    for (std::size_t k = 0; k < rate.size(); ++k) {
        const double den = i[k] * i[k] + q[k] * q[k];
        if (valid.contains(k) && !(den > eps)) {
            throw DegenerateQuadrature("mdacm_demod: I^2 + Q^2 vanishes at sample " + std::to_string(k));
        }
        rate[k] = (i[k] * dq[k] - q[k] * di[k]) / den;
    }
    return integrate_rate(std::move(rate), iq.sample_rate_hz(), valid, wavelength_m);
}

PhaseSeries acaa_demod(const IqSeries& iq, double wavelength_m, const DemodOptions& options) {
    check_wavelength(wavelength_m);
    const std::size_t n = iq.size();
    if (n < 3) {
        throw DomainError("acaa_demod: at least 3 samples required");
    }
    const auto valid = trimmed_range(n, iq.sample_rate_hz(), options.edge_trim_s);
    const auto i = iq.i();
    const auto q = iq.q();

    // Scale from offsets to the first sample so a translated trajectory yields
    // bit-identical thresholds whenever the translation itself is exact.
    std::vector<double> rel_i(n), rel_q(n);
    for (std::size_t k = 0; k < n; ++k) {
        rel_i[k] = i[k] - i[0];
        rel_q[k] = q[k] - q[0];
    }
    const double scale = std::hypot(robust_range(rel_i), robust_range(rel_q));
    const double eps = 1e-6 * scale;

    // turn[c] is the accumulated angle after chord c (chord c joins c and c+1).
    std::vector<double> turn(n - 1, 0.0);
    bool have_previous = false;
    double prev_di = 0.0;
    double prev_dq = 0.0;
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        const double di = i[c + 1] - i[c];
        const double dq = q[c + 1] - q[c];
        if (scale > 0.0 && std::hypot(di, dq) >= eps) {
            if (have_previous) {
                acc += std::atan2(prev_di * dq - prev_dq * di, prev_di * di + prev_dq * dq);
            }
            have_previous = true;
            prev_di = di;
            prev_dq = dq;
        }
        turn[c] = acc;
    }
    if (!have_previous) {
        throw DegenerateQuadrature("acaa_demod: stationary trajectory");
    }

    // Chord c's direction tracks the phase midway between samples c and c+1;
    // average adjacent chords to land back on the sample grid and extend the
    // first and last chord by half a turn.
    std::vector<double> phase(n);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        phase[k] = 0.5 * (turn[k - 1] + turn[k]);
    }
    phase[0] = turn[0] - 0.5 * (turn[1] - turn[0]);
    phase[n - 1] = turn[n - 2] + 0.5 * (turn[n - 2] - turn[n - 3]);
    return anchored(std::move(phase), iq.sample_rate_hz(), valid, wavelength_m);
}

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
    case Algorithm::atan:
        return "atan";
    case Algorithm::mdacm:
        return "mdacm";
    case Algorithm::acaa:
        return "acaa";
    case Algorithm::hadcm:
        return "hadcm";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    for (auto a : {Algorithm::atan, Algorithm::mdacm, Algorithm::acaa, Algorithm::hadcm}) {
        if (name == to_string(a)) {
            return a;
        }
    }
    return std::nullopt;
}

PhaseSeries demodulate(Algorithm algorithm, const IqSeries& iq, double wavelength_m,
                       const DemodOptions& options) {
    switch (algorithm) {
    case Algorithm::atan:
        return atan_demod(iq, wavelength_m, options);
    case Algorithm::mdacm:
        return mdacm_demod(iq, wavelength_m, options);
    case Algorithm::acaa:
        return acaa_demod(iq, wavelength_m, options);
    case Algorithm::hadcm:
        return hadcm(iq, wavelength_m, options);
    }
    throw DomainError("demodulate: unknown algorithm");
}

} // namespace vitaliq

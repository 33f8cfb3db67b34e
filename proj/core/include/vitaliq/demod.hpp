// SPDX-License-Identifier: Apache-2.0
#pragma once

// Phase demodulators for calibrated quadrature records.
//
// HADCM forms, from the calibrated channels I_C/Q_C, their Hilbert transforms
// I_H/Q_H and their time derivatives,
//
//     numerator   = I_C dQ_C/dt - Q_C dI_C/dt     = A_I A_Q cos(phi_I - phi_Q) dp/dt
//     denominator = I_H Q_C - I_C Q_H             = A_I A_Q cos(phi_I - phi_Q)
//
// so their ratio is dp/dt with amplitude and constant phase imbalance
// cancelled, and integrates it. ATAN, MDACM (normalized differentiate and
// cross-multiply) and ACAA (adjacent chord angle accumulation) are the
// baselines.
//
// Every demodulator returns phase anchored to zero at valid.begin and trims
// edge_trim_s from both ends of the valid range.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vitaliq/iq_series.hpp"

namespace vitaliq {

/// Imaginary part of the analytic signal (FFT method); hilbert(cos) = sin.
std::vector<double> hilbert(std::span<const double> x);

/// Central differences inside, one-sided differences at both ends.
std::vector<double> differentiate(std::span<const double> x, double dt);

/// FFT derivative of the even (mirror) extension of x. Exact for band-limited
/// content below Nyquist; the mirror keeps the extension continuous so edge
/// errors stay local.
std::vector<double> spectral_derivative(std::span<const double> x, double dt);

/// Cumulative trapezoidal integral with out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> x, double dt);

/// Adds multiples of 2 pi so consecutive samples differ by at most pi.
std::vector<double> unwrap(std::span<const double> angles);

enum class DerivativeScheme {
    central_difference,
    spectral,
};

enum class DenominatorMode {
    /// Divide by the raw Hilbert cross term sample by sample.
    pointwise,
    /// |numerator|-weighted median of the sign-aligned cross term.
    weighted_median,
};

struct DemodOptions {
    DerivativeScheme derivative = DerivativeScheme::spectral;
    double edge_trim_s = 1.0;
    DenominatorMode denominator = DenominatorMode::weighted_median;
    /// Moving window for the weighted median; <= 0 uses the whole valid range.
    double denominator_window_s = 0.0;
};

/// [ceil(trim_s * fs), n - ceil(trim_s * fs)); DomainError when nothing is left.
IndexRange trimmed_range(std::size_t n, double sample_rate_hz, double trim_s);

/// Intermediate series of HADCM, exposed for diagnostics and tests.
struct HadcmTerms {
    std::vector<double> numerator;
    std::vector<double> raw_denominator;
    std::vector<double> denominator;
    IndexRange valid;
};

HadcmTerms hadcm_terms(const IqSeries& calibrated, const DemodOptions& options = {});

/// Throws DegenerateQuadrature when the stabilized denominator vanishes.
PhaseSeries hadcm(const IqSeries& calibrated, double wavelength_m, const DemodOptions& options = {});

/// Unwrapped atan2(Q, I). Performs no DC removal of its own. Throws
/// DegenerateQuadrature when a sample sits exactly at the origin.
PhaseSeries atan_demod(const IqSeries& iq, double wavelength_m, const DemodOptions& options = {});

/// dp/dt = (I dQ - Q dI) / (I^2 + Q^2), integrated.
PhaseSeries mdacm_demod(const IqSeries& iq, double wavelength_m, const DemodOptions& options = {});

/// Accumulated signed turn angles between consecutive chords of the (I, Q)
/// trajectory. Chords shorter than 1e-6 of the trajectory scale are skipped.
/// Throws DegenerateQuadrature ("stationary trajectory") when all are.
PhaseSeries acaa_demod(const IqSeries& iq, double wavelength_m, const DemodOptions& options = {});

enum class Algorithm {
    atan,
    mdacm,
    acaa,
    hadcm,
};

std::string_view to_string(Algorithm a) noexcept;
/// Accepts "atan", "mdacm", "acaa", "hadcm"; nullopt otherwise.
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

PhaseSeries demodulate(Algorithm algorithm, const IqSeries& iq, double wavelength_m,
                       const DemodOptions& options = {});

} // namespace vitaliq

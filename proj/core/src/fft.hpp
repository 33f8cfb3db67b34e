// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

namespace vitaliq::detail {

using cplx = std::complex<double>;

// Thin FFTW wrappers. Planning is serialized internally; execution is
// reentrant, so these are safe to call from concurrent trials.

/// Unnormalized forward DFT of a real sequence; returns all N bins.
std::vector<cplx> fft_real(std::span<const double> x);

/// Unnormalized forward DFT of a complex sequence.
std::vector<cplx> fft(std::span<const cplx> x);

/// Inverse DFT scaled by 1/N.
std::vector<cplx> ifft(std::span<const cplx> x);

} // namespace vitaliq::detail

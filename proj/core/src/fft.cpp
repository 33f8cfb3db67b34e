// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace vitaliq::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<cplx> transform(std::span<const cplx> x, int sign) {
    const int n = static_cast<int>(x.size());
    std::vector<cplx> in(x.begin(), x.end());
    std::vector<cplx> out(x.size());
    if (n == 0) {
        return out;
    }
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, pin, pout, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

std::vector<cplx> fft_real(std::span<const double> x) {
    std::vector<cplx> c(x.begin(), x.end());
    return transform(c, FFTW_FORWARD);
}

std::vector<cplx> fft(std::span<const cplx> x) {
    return transform(x, FFTW_FORWARD);
}

std::vector<cplx> ifft(std::span<const cplx> x) {
    auto out = transform(x, FFTW_BACKWARD);
    const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
    for (auto& v : out) {
        v *= scale;
    }
    return out;
}

} // namespace vitaliq::detail

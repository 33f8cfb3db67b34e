// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "vitaliq/calibration.hpp"
#include "vitaliq/demod.hpp"
#include "vitaliq/signal_model.hpp"

namespace {

vitaliq::Synthesis scenario(double duration_s) {
    vitaliq::VitalSignScenario s;
    s.duration_s = duration_s;
    s.snr_db = 20.0;
    s.seed = 7;
    return vitaliq::synthesize(s);
}

void BM_Synthesize(benchmark::State& state) {
    vitaliq::VitalSignScenario s;
    s.duration_s = static_cast<double>(state.range(0));
    s.snr_db = 20.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vitaliq::synthesize(s));
    }
}
BENCHMARK(BM_Synthesize)->Arg(60)->Arg(600);

void BM_Hilbert(benchmark::State& state) {
    const auto s = scenario(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vitaliq::hilbert(s.iq.i()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.iq.size()));
}
BENCHMARK(BM_Hilbert)->Arg(60)->Arg(600);

void BM_PeakValley(benchmark::State& state) {
    const auto s = scenario(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vitaliq::peak_valley_dc(s.iq));
    }
}
BENCHMARK(BM_PeakValley)->Arg(60)->Arg(600);

void BM_Demodulate(benchmark::State& state) {
    const auto s = scenario(60.0);
    const auto calibrated = vitaliq::calibrate(s.iq, vitaliq::peak_valley_dc(s.iq));
    const auto algorithm = static_cast<vitaliq::Algorithm>(state.range(0));
    state.SetLabel(std::string(vitaliq::to_string(algorithm)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vitaliq::demodulate(algorithm, calibrated, 0.005));
    }
}
BENCHMARK(BM_Demodulate)->DenseRange(0, 3);

} // namespace

BENCHMARK_MAIN();

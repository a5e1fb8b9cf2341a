#include <benchmark/benchmark.h>

#include "../tests/benchmark_params.hpp"
#include "qtoa/amplitudes.hpp"
#include "qtoa/analysis.hpp"
#include "qtoa/arrival.hpp"
#include "qtoa/curve.hpp"
#include "qtoa/kernels.hpp"
#include "qtoa/oscillation.hpp"

using namespace qtoa;

static void BM_CoherenceKernel(benchmark::State& st) {
  const KernelSpec spec = KernelSpec::from_channel(bench::channel());
  double s = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(coherence_kernel(s, spec));
    s += 1e-6;  // defeat value caching without leaving the kernel core
  }
}
BENCHMARK(BM_CoherenceKernel);

static void BM_AmplitudeNoDispersion(benchmark::State& st) {
  const auto state = bench::state();
  const auto mix = bench::mixing();
  double t = 400.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(amplitude_no_dispersion(state, mix, 0, t, 320.0));
    t += 1e-6;
  }
}
BENCHMARK(BM_AmplitudeNoDispersion);

static void BM_AmplitudeMomentumIntegral(benchmark::State& st) {
  const auto state = bench::state();
  const auto mix = bench::mixing();
  for (auto _ : st)
    benchmark::DoNotOptimize(amplitude_momentum_integral(state, mix, 0, 400.0, 320.0));
}
BENCHMARK(BM_AmplitudeMomentumIntegral);

static void BM_ArrivalPdf(benchmark::State& st) {
  const auto psi = MomentumWavefunction::gaussian(1e4, 10.0, 1e6);
  double t = 1e8;
  for (auto _ : st) {
    benchmark::DoNotOptimize(arrival_time_pdf(psi, 1e3, t));
    t += 1.0;
  }
}
BENCHMARK(BM_ArrivalPdf);

static void BM_ClosedSimplifiedPoint(benchmark::State& st) {
  const auto state = bench::state();
  const auto mix = bench::mixing();
  const auto ch = bench::channel();
  double l = 250.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        detection_probability_closed(state, mix, ch, {l, 1e30}, ClosedFormMode::simplified));
    l += 1e-3;
  }
}
BENCHMARK(BM_ClosedSimplifiedPoint);

static void BM_ClosedGeneralPoint(benchmark::State& st) {
  const auto state = bench::state();
  const auto mix = bench::mixing();
  const auto ch = bench::channel();
  double l = 250.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        detection_probability_closed(state, mix, ch, {l, 1e30}, ClosedFormMode::general));
    l += 1e-3;
  }
}
BENCHMARK(BM_ClosedGeneralPoint);

static void BM_NumericPoint(benchmark::State& st) {
  const auto state = bench::state();
  const auto mix = bench::mixing();
  const auto ch = bench::channel();
  for (auto _ : st)
    benchmark::DoNotOptimize(detection_probability_numeric(state, mix, ch, {250.0, 1e30}));
}
BENCHMARK(BM_NumericPoint)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_WavelengthCurves(benchmark::State& st) {
  const auto grid = logspace(1.0, 1e6, 1000);
  for (auto _ : st) benchmark::DoNotOptimize(wavelength_curves(grid));
}
BENCHMARK(BM_WavelengthCurves);

static void BM_WavenumberFit(benchmark::State& st) {
  Curve c;
  c.x = linspace(0.0, 630.0, 181);
  for (double x : c.x) c.y.push_back(1.0 + 0.5 * std::cos(0.0299 * x));
  c.meta = {"L", "p", AxisKind::length, "synthetic", {}};
  for (auto _ : st) benchmark::DoNotOptimize(extract_wavenumber(c));
}
BENCHMARK(BM_WavenumberFit);

BENCHMARK_MAIN();

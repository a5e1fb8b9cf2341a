// Acceptance suite: nine go/no-go checks on the library's headline results,
// each with a pinned tolerance and a wall-clock budget.  Prints one [PASS]
// line per criterion and aborts with [FAIL] and exit code 1 on the first
// miss.  Parameters follow the desk-scale benchmark in benchmark_params.hpp.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <random>
#include <vector>

#include "../tests/benchmark_params.hpp"
#include "qtoa/analysis.hpp"
#include "qtoa/arrival.hpp"
#include "qtoa/curve.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/oscillation.hpp"

#define REQUIRE(cond, msg)                                                      \
  do {                                                                          \
    if (!(cond)) {                                                              \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg       \
                << "\n";                                                        \
      std::exit(1);                                                             \
    }                                                                           \
  } while (0)

namespace {

using namespace qtoa;
constexpr double pi = std::numbers::pi;

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

// 1. The dimensionless wavelength ratio equals 4 pi at threshold, falls
//    monotonically, and reaches 2 pi in the high-energy limit.
void criterion1() {
  const auto t0 = clock_type::now();
  const auto wc = wavelength_curves(logspace(1.0, 1e6, 1000));
  const double at_threshold = std::fabs(wc.threshold.y.front() - 4 * pi);
  REQUIRE(at_threshold <= 1e-9,
          "threshold-curve start differs from 4*pi by " << at_threshold);
  const double at_high_energy = rel(wc.threshold.y.back(), 2 * pi);
  REQUIRE(at_high_energy <= 1e-5,
          "threshold-curve end differs from 2*pi by relative " << at_high_energy);
  for (size_t i = 1; i < wc.threshold.y.size(); ++i)
    REQUIRE(wc.threshold.y[i] < wc.threshold.y[i - 1],
            "ratio curve not strictly decreasing at index " << i);
  const double dt = seconds_since(t0);
  REQUIRE(dt < 1.0, "runtime " << dt << " s exceeds 1 s");
  std::cout << "[PASS] criterion 1: wavelength ratio 4*pi -> 2*pi, strictly decreasing"
            << " (endpoint errors " << at_threshold << ", " << at_high_energy << "; " << dt
            << " s)\n";
}

// 2. At zero threshold and equal momenta the wavenumber is exactly twice the
//    textbook value for ultra-relativistic masses.
void criterion2() {
  const auto t0 = clock_type::now();
  const auto spec = MassSpectrum::equal_momentum({1e-4, 0.5e-4}, 1.0);
  const double ratio =
      oscillation_wavenumber(spec, 0, 1, 0.0) / standard_wavenumber(spec, 0, 1);
  REQUIRE(rel(ratio, 2.0) <= 1e-6, "wavenumber ratio " << ratio << " is not 2");
  const double dt = seconds_since(t0);
  REQUIRE(dt < 1.0, "runtime " << dt << " s exceeds 1 s");
  std::cout << "[PASS] criterion 2: zero-threshold equal-momentum ratio = " << ratio << " ("
            << dt << " s)\n";
}

// 3. Direct quadrature of the two-time coherence integral and the general
//    closed form agree over three oscillation wavelengths, and the numeric
//    curve oscillates at the threshold-shifted wavenumber.
void criterion3() {
  const auto t0 = clock_type::now();
  const auto state = bench::state();
  const auto mix = bench::mixing();
  const auto ch = bench::channel();
  const double k1 = bench::wavenumber();
  const auto grid = linspace(bench::L_min, bench::L_min + 3.0 * bench::wavelength(), 97);

  Curve numeric;
  numeric.x = grid;
  numeric.meta = {"L", "p", AxisKind::length, "numeric", {}};
  double num2 = 0, den2 = 0;
  for (double l : grid) {
    const double pn = detection_probability_numeric(state, mix, ch, {l, 1e30}).value;
    const double pc =
        detection_probability_closed(state, mix, ch, {l, 1e30}, ClosedFormMode::general).value;
    numeric.y.push_back(pn);
    num2 += (pn - pc) * (pn - pc);
    den2 += pc * pc;
  }
  const double l2 = std::sqrt(num2 / den2);
  REQUIRE(l2 < 1e-2, "relative L2 distance between paths is " << l2);

  const WavenumberFit fit = extract_wavenumber(numeric);
  const double kerr = rel(fit.wavenumber, k1);
  REQUIRE(kerr <= 0.01,
          "fitted wavenumber " << fit.wavenumber << " vs expected " << k1 << " (rel " << kerr
                               << ")");
  const double dt = seconds_since(t0);
  REQUIRE(dt < 60.0, "runtime " << dt << " s exceeds 60 s");
  std::cout << "[PASS] criterion 3: quadrature vs closed form L2 = " << l2
            << ", fitted k rel err = " << kerr << " (" << dt << " s)\n";
}

// 4. The arrival-time density is normalized, peaks at the classical flight
//    time, and a two-packet state beats at |p1^2 - p2^2| / 2M.
void criterion4() {
  const auto t0 = clock_type::now();
  const double M = 1e3, a = 1e4, pbar = 10.0, L = 1e6;
  const auto psi = MomentumWavefunction::gaussian(a, pbar, L);
  const double tcl = L * M / pbar;
  const double w = a * M / (2 * pbar);

  const double P = arrival_probability(psi, M, tcl - 10 * w, tcl + 10 * w, 1e-7, {tcl});
  REQUIRE(std::fabs(P - 1.0) <= 1e-6, "arrival density integrates to " << P);

  double t_peak = tcl, best = -1;
  for (int i = 0; i <= 200; ++i) {
    const double t = tcl * (0.98 + 0.04 * i / 200.0);
    const double f = arrival_time_pdf(psi, M, t);
    if (f > best) {
      best = f;
      t_peak = t;
    }
  }
  REQUIRE(rel(t_peak, tcl) <= 0.01,
          "density peak at " << t_peak << " vs classical arrival " << tcl);

  const TwoPacketSpec two{1e3, 1e5, 1e4, 10.0, 10.5};
  const auto psi2 = two.state();
  const double center = two.classical_arrival();
  const double omega = two.beat_frequency();
  const int n = 8192;
  const double span = 1e6, h = span / n;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i)
    samples[size_t(i)] = arrival_time_pdf(psi2, two.mass, center - span / 2 + i * h);
  const auto ps = power_spectrum(samples);
  size_t peak_bin = 16;
  for (size_t j = 16; j < ps.size(); ++j)
    if (ps[j] > ps[peak_bin]) peak_bin = j;
  const double k_found = 2 * pi * double(peak_bin) / (n * h);
  REQUIRE(rel(k_found, omega) <= 0.01,
          "beat frequency " << k_found << " vs expected " << omega);

  const double dt = seconds_since(t0);
  REQUIRE(dt < 10.0, "runtime " << dt << " s exceeds 10 s");
  std::cout << "[PASS] criterion 4: norm = " << P << ", peak rel err = " << rel(t_peak, tcl)
            << ", beat rel err = " << rel(k_found, omega) << " (" << dt << " s)\n";
}

// 5. Detection probabilities are linear in the initial density matrix: a
//    random convex combination of packets equals the weighted sum of its
//    components on both evaluation paths.
void criterion5() {
  const auto t0 = clock_type::now();
  const auto spec = bench::spectrum();
  const auto mix = bench::mixing();
  const auto ch = bench::channel();
  const ExperimentGeometry g{bench::L_min, 1e30};

  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> shift(0.0, 50.0);
  std::uniform_real_distribution<double> momentum(3.8, 4.2);
  std::uniform_real_distribution<double> raw_weight(0.2, 1.0);

  std::vector<double> masses;
  for (const auto& s : spec.states()) masses.push_back(s.mass);

  double worst_closed = 0, worst_numeric = 0;
  for (int combo = 0; combo < 20; ++combo) {
    const int parts = 2 + int(rng() % 2);
    MixedInitialState mixed;
    mixed.sigma = bench::sigma;
    double wsum = 0;
    for (int c = 0; c < parts; ++c) {
      mixed.components.push_back({shift(rng), momentum(rng), raw_weight(rng)});
      wsum += mixed.components.back().weight;
    }
    for (auto& c : mixed.components) c.weight /= wsum;

    for (ProbabilityPath path :
         {ProbabilityPath::closed_general, ProbabilityPath::numeric}) {
      const double whole =
          mixed_state_probability(spec, mixed, mix, 0, ch, g, path).result.value;
      double sum = 0;
      for (const auto& c : mixed.components) {
        const WavePacketState pure{MassSpectrum::equal_momentum(masses, c.momentum),
                                   bench::sigma, 0, 0.0};
        sum += c.weight *
               detection_probability(pure, mix, ch,
                                     {g.distance + c.center_shift, g.horizon}, path)
                   .value;
      }
      const double err = rel(whole, sum);
      if (path == ProbabilityPath::numeric)
        worst_numeric = std::max(worst_numeric, err);
      else
        worst_closed = std::max(worst_closed, err);
    }
  }
  REQUIRE(worst_closed <= 1e-12, "closed-path linearity violated at " << worst_closed);
  REQUIRE(worst_numeric <= 1e-6, "numeric-path linearity violated at " << worst_numeric);
  const double dt = seconds_since(t0);
  REQUIRE(dt < 60.0, "runtime " << dt << " s exceeds 60 s");
  std::cout << "[PASS] criterion 5: linearity over 20 mixtures, closed " << worst_closed
            << ", numeric " << worst_numeric << " (" << dt << " s)\n";
}

// 6. A single mass eigenstate does not oscillate: its detection curve has no
//    spectral line above one part in 10^3 of the mean level.
void criterion6() {
  const auto t0 = clock_type::now();
  const WavePacketState one{MassSpectrum::equal_momentum({3.0}, bench::momentum),
                            bench::sigma, 0, 0.0};
  const auto u = MixingMatrix::identity(1);
  const auto ch = bench::channel();
  const auto grid = linspace(bench::L_min, bench::L_min + 5.0 * bench::wavelength(), 256);
  std::vector<double> y;
  for (double l : grid)
    y.push_back(
        detection_probability_closed(one, u, ch, {l, 1e30}, ClosedFormMode::general).value);
  const auto ps = power_spectrum(y);
  double worst = 0;
  for (size_t j = 1; j < ps.size(); ++j) worst = std::max(worst, ps[j]);
  REQUIRE(worst <= 1e-3 * ps[0],
          "spectral line at " << worst / ps[0] << " of the mean level");
  const double dt = seconds_since(t0);
  REQUIRE(dt < 5.0, "runtime " << dt << " s exceeds 5 s");
  std::cout << "[PASS] criterion 6: single-eigenstate spectrum flat to " << worst / ps[0]
            << " of DC (" << dt << " s)\n";
}

// 7. The distinguishability of threshold-shifted and standard event
//    distributions grows with the phase-scale parameter and stays in [0, 8].
void criterion7() {
  const auto t0 = clock_type::now();
  std::vector<double> d;
  for (double alpha : {5.0, 10.0, 20.0, 40.0}) {
    const ComparisonSpec spec{alpha, 1.0, 10.0, 2001};
    const Curve p1 = event_distribution(EventModel::standard, spec);
    const Curve p2 = event_distribution(EventModel::threshold, spec);
    d.push_back(statistical_distance(p1, p2));
    REQUIRE(d.back() >= 0.0 && d.back() <= 8.0,
            "distance " << d.back() << " outside [0, 8] at alpha " << alpha);
    REQUIRE(statistical_distance(p1, p1) == 0.0, "self-distance is not exactly zero");
  }
  for (size_t i = 1; i < d.size(); ++i)
    REQUIRE(d[i] >= 0.95 * d[i - 1],
            "distance not non-decreasing: d[" << i << "] = " << d[i] << " after " << d[i - 1]);
  const double dt = seconds_since(t0);
  REQUIRE(dt < 5.0, "runtime " << dt << " s exceeds 5 s");
  std::cout << "[PASS] criterion 7: d12 = {" << d[0] << ", " << d[1] << ", " << d[2] << ", "
            << d[3] << "} non-decreasing (" << dt << " s)\n";
}

// 8. Shrinking the detector coherence times below the arrival-time splitting
//    moves the fitted wavenumber monotonically from the threshold-shifted
//    value down to the textbook one.
void criterion8() {
  const auto t0 = clock_type::now();
  const auto state = bench::state();
  const auto mix = bench::mixing();
  const double k1 = bench::wavenumber();
  const double k_std = standard_wavenumber(bench::spectrum(), 0, 1);
  const auto grid = linspace(250.0, 1006.0, 97);
  EngineOptions eng;
  eng.enforce_regime = false;

  std::vector<double> fitted;
  for (double tau : {3000.0, 100.0, 10.0, 0.12}) {
    const auto ch = bench::channel_with_tau(tau);
    Curve c;
    c.x = grid;
    c.meta = {"L", "p", AxisKind::length, "numeric", {}};
    for (double l : grid)
      c.y.push_back(detection_probability_numeric(state, mix, ch, {l, 1e30}, eng).value);
    fitted.push_back(extract_wavenumber(c).wavenumber);
  }
  for (size_t i = 1; i < fitted.size(); ++i)
    REQUIRE(fitted[i] < fitted[i - 1], "fitted wavenumber not strictly decreasing: "
                                           << fitted[i] << " after " << fitted[i - 1]);
  REQUIRE(rel(fitted.front(), k1) <= 0.1,
          "long-coherence endpoint " << fitted.front() << " vs " << k1);
  REQUIRE(rel(fitted.back(), k_std) <= 0.1,
          "short-coherence endpoint " << fitted.back() << " vs " << k_std);
  const double dt = seconds_since(t0);
  REQUIRE(dt < 120.0, "runtime " << dt << " s exceeds 120 s");
  std::cout << "[PASS] criterion 8: fitted k falls {" << fitted[0] << ", " << fitted[1]
            << ", " << fitted[2] << ", " << fitted[3] << "} from " << k1 << " toward "
            << k_std << " (" << dt << " s)\n";
}

// 9. Reaction channels contribute additively, and Gaussian position smearing
//    multiplies the visibility by exp(-k^2 delta^2 / 2).
void criterion9() {
  const auto t0 = clock_type::now();
  const auto state = bench::state();
  const auto mix = bench::mixing();
  const auto ch1 = bench::channel();
  auto ch2 = bench::channel();
  ch2.epsilon_th = 2.0;

  double worst = 0;
  for (double l : {250.0, 430.0, 610.0}) {
    const ExperimentGeometry g{l, 1e30};
    const double a =
        detection_probability(state, mix, ch1, g, ProbabilityPath::closed_simplified).value;
    const double b =
        detection_probability(state, mix, ch2, g, ProbabilityPath::closed_simplified).value;
    const double m = multi_channel_probability(state, mix, {{ch1, 0.7}, {ch2, 0.3}}, g,
                                               ProbabilityPath::closed_simplified)
                         .value;
    worst = std::max(worst, rel(m, 0.7 * a + 0.3 * b));
  }
  REQUIRE(worst <= 1e-14, "channel additivity violated at relative " << worst);

  const double k = bench::wavenumber();
  const double width = 30.0;
  Curve c;
  c.x = linspace(0.0, 420.0, 841);
  c.meta = {"L", "p", AxisKind::length, "cosine", {}};
  for (double x : c.x) c.y.push_back(1.0 + 0.8 * std::cos(k * x));
  const Curve s = gaussian_smear(c, width);
  double lo0 = 1e30, hi0 = -1e30, lo = 1e30, hi = -1e30;
  for (size_t i = 200; i + 200 < c.x.size(); ++i) {
    lo0 = std::min(lo0, c.y[i]);
    hi0 = std::max(hi0, c.y[i]);
    lo = std::min(lo, s.y[i]);
    hi = std::max(hi, s.y[i]);
  }
  const double vis0 = (hi0 - lo0) / (hi0 + lo0);
  const double vis = (hi - lo) / (hi + lo);
  const double predicted = vis0 * std::exp(-0.5 * k * k * width * width);
  REQUIRE(rel(vis, predicted) <= 0.05,
          "smeared visibility " << vis << " vs predicted " << predicted);
  const double dt = seconds_since(t0);
  REQUIRE(dt < 5.0, "runtime " << dt << " s exceeds 5 s");
  std::cout << "[PASS] criterion 9: additivity to " << worst << ", smeared visibility "
            << vis << " vs " << predicted << " (" << dt << " s)\n";
}

}  // namespace

int main() {
  std::cout.precision(10);
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::cout << "all 9 acceptance criteria passed\n";
  return 0;
}

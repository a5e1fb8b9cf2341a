#include "qtoa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <fftw3.h>

#include "qtoa/errors.hpp"
#include "qtoa/quadrature.hpp"

namespace qtoa {

namespace {
constexpr double pi = std::numbers::pi;

double check_uniform(const std::vector<double>& x, const char* who) {
  if (x.size() < 2) throw GridMismatch(std::string(who) + ": need at least two points");
  const double h = x[1] - x[0];
  if (!(h > 0)) throw GridMismatch(std::string(who) + ": grid must be increasing");
  const double span = x.back() - x.front();
  for (size_t i = 1; i < x.size(); ++i)
    if (std::fabs((x[i] - x[i - 1]) - h) > 1e-9 * span)
      throw GridMismatch(std::string(who) + ": grid is not uniform");
  return h;
}
}  // namespace

WavelengthCurves wavelength_curves(const std::vector<double>& e_over_eth) {
  if (e_over_eth.empty()) throw ValidationError("e_over_eth", "empty grid");
  for (size_t i = 0; i < e_over_eth.size(); ++i) {
    if (!(e_over_eth[i] >= 1.0))
      throw ValidationError("e_over_eth", "grid must satisfy x >= 1 (above threshold)");
    if (i > 0 && !(e_over_eth[i] > e_over_eth[i - 1]))
      throw ValidationError("e_over_eth", "grid must be strictly increasing");
  }
  WavelengthCurves out;
  CurveMeta meta;
  meta.x_label = "E_over_eth";
  meta.y_label = "lambda_dm2_over_E";
  meta.x_kind = AxisKind::dimensionless;

  out.standard = {e_over_eth, std::vector<double>(e_over_eth.size(), 4 * pi), meta};
  out.standard.meta.model = "standard";
  out.factor_two = {e_over_eth, std::vector<double>(e_over_eth.size(), 2 * pi), meta};
  out.factor_two.meta.model = "factor_two";
  out.threshold = {e_over_eth, {}, meta};
  out.threshold.meta.model = "threshold";
  out.threshold.y.reserve(e_over_eth.size());
  for (double x : e_over_eth) out.threshold.y.push_back(2 * pi / (1.0 - 0.5 / x));
  return out;
}

void validate_comparison(const ComparisonSpec& spec) {
  if (!(spec.alpha > 0)) throw ValidationError("comparison.alpha", "must be > 0");
  if (!(spec.x_lo >= 1.0)) throw ValidationError("comparison.x_lo", "must be >= 1");
  if (!(spec.x_hi > spec.x_lo)) throw ValidationError("comparison.x_hi", "must exceed x_lo");
  if (spec.grid_points < 100) throw ValidationError("comparison.grid_points", "must be >= 100");
}

Curve event_distribution(EventModel model, const ComparisonSpec& spec) {
  validate_comparison(spec);
  const bool thr = model == EventModel::threshold;

  // Fastest phase advance of sin^2(theta(x)) on the window; period pi/|th'|.
  auto dtheta = [&](double x) {
    return thr ? spec.alpha * (x - 1.0) / (x * x * x) : spec.alpha / (x * x);
  };
  double max_rate = std::max(dtheta(spec.x_lo), dtheta(spec.x_hi));
  if (thr && spec.x_lo < 1.5 && spec.x_hi > 1.5) max_rate = std::max(max_rate, dtheta(1.5));
  const double h = (spec.x_hi - spec.x_lo) / (spec.grid_points - 1);
  if (max_rate > 0 && h > pi / (10.0 * max_rate)) {
    const int needed =
        static_cast<int>(std::ceil((spec.x_hi - spec.x_lo) * 10.0 * max_rate / pi)) + 1;
    throw GridTooCoarse("event_distribution: " + std::to_string(spec.grid_points) +
                        " points give fewer than 10 per oscillation period (need >= " +
                        std::to_string(needed) + ")");
  }

  Curve c;
  c.x = linspace(spec.x_lo, spec.x_hi, spec.grid_points);
  c.y.reserve(c.x.size());
  for (double x : c.x) {
    const double theta = thr ? spec.alpha * (1.0 - 0.5 / x) / x : spec.alpha / x;
    const double s = std::sin(theta);
    c.y.push_back(s * s);
  }
  c.meta.x_label = "E_over_eth";
  c.meta.y_label = "event_density";
  c.meta.x_kind = AxisKind::dimensionless;
  c.meta.model = thr ? "threshold" : "standard";
  return normalized(c);
}

double statistical_distance(const Curve& p1, const Curve& p2) {
  validate_curve(p1);
  validate_curve(p2);
  if (p1.x.size() != p2.x.size() || p1.x != p2.x)
    throw GridMismatch("statistical_distance: distributions use different grids");
  if (p1.y == p2.y) return 0.0;  // identical distributions are distance 0 by definition
  std::vector<double> integrand(p1.y.size());
  for (size_t i = 0; i < p1.y.size(); ++i) {
    if (p1.y[i] < -1e-12 || p2.y[i] < -1e-12)
      throw ValidationError("statistical_distance", "distributions must be non-negative");
    integrand[i] = std::sqrt(std::max(p1.y[i], 0.0) * std::max(p2.y[i], 0.0));
  }
  const double overlap = simpson(p1.x, integrand);
  return std::clamp(8.0 * (1.0 - overlap), 0.0, 8.0);
}

std::vector<double> power_spectrum(const std::vector<double>& y) {
  static std::mutex fftw_mutex;
  const size_t n = y.size();
  if (n < 2) throw GridMismatch("power_spectrum: need at least two samples");
  std::vector<double> in(y);
  std::vector<std::complex<double>> out(n / 2 + 1);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE);
    if (!plan) throw NumericError("power_spectrum: FFT plan failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  std::vector<double> mag(out.size());
  for (size_t i = 0; i < out.size(); ++i) mag[i] = std::abs(out[i]);
  return mag;
}

namespace {

struct LinearFit {
  double offset = 0, bc = 0, bs = 0;  // a, B, C in a + B cos + C sin
  double sse = 0;
};

LinearFit solve_linear(const std::vector<double>& x, const std::vector<double>& y, double k,
                       double c) {
  const size_t n = x.size();
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < n; ++i) {
    const double decay = std::exp(-c * (x[i] - x[0]));
    const Eigen::Vector3d row(1.0, decay * std::cos(k * x[i]), decay * std::sin(k * x[i]));
    m += row * row.transpose();
    rhs += row * y[i];
  }
  const Eigen::Vector3d sol = m.ldlt().solve(rhs);
  LinearFit fit;
  fit.offset = sol(0);
  fit.bc = sol(1);
  fit.bs = sol(2);
  fit.sse = 0;
  for (size_t i = 0; i < n; ++i) {
    const double decay = std::exp(-c * (x[i] - x[0]));
    const double model =
        sol(0) + decay * (sol(1) * std::cos(k * x[i]) + sol(2) * std::sin(k * x[i]));
    fit.sse += (y[i] - model) * (y[i] - model);
  }
  return fit;
}

double ternary_min(const std::function<double(double)>& f, double lo, double hi, int iters) {
  for (int it = 0; it < iters; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

WavenumberFit extract_wavenumber(const Curve& curve) {
  validate_curve(curve);
  const size_t n = curve.x.size();
  if (n < 16) throw FitFailure("extract_wavenumber: need at least 16 samples");
  const double h = check_uniform(curve.x, "extract_wavenumber");

  const double mean = std::accumulate(curve.y.begin(), curve.y.end(), 0.0) /
                      static_cast<double>(n);
  std::vector<double> centered(curve.y);
  for (double& v : centered) v -= mean;
  double y_scale = 0;
  for (double v : centered) y_scale += v * v;

  const std::vector<double> mag = power_spectrum(centered);
  size_t peak = 1;
  for (size_t j = 2; j < mag.size(); ++j)
    if (mag[j] > mag[peak]) peak = j;
  if (!(mag[peak] * mag[peak] > 1e-20 * std::max(y_scale, 1e-300)))
    throw FitFailure("extract_wavenumber: no oscillatory component above noise");
  if (peak < 2)
    throw FitFailure("extract_wavenumber: window spans fewer than about two periods");

  const double k0 = 2 * pi * static_cast<double>(peak) / (static_cast<double>(n) * h);
  const double span = curve.x.back() - curve.x.front();

  // Coarse scan at c = 0, then alternate 1-d refinements in k and c.
  double best_k = k0, best_sse = std::numeric_limits<double>::infinity();
  const int scan_n = 601;
  for (int s = 0; s < scan_n; ++s) {
    const double k = k0 * (0.6 + 0.8 * static_cast<double>(s) / (scan_n - 1));
    const double sse = solve_linear(curve.x, curve.y, k, 0.0).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_k = k;
    }
  }
  double best_c = 0;
  const double dk = k0 * 0.8 / (scan_n - 1);
  const double c_max = 5.0 / span;
  for (int round = 0; round < 3; ++round) {
    best_k = ternary_min(
        [&](double k) { return solve_linear(curve.x, curve.y, k, best_c).sse; },
        best_k - 2 * dk, best_k + 2 * dk, 60);
    best_c = ternary_min(
        [&](double c) { return solve_linear(curve.x, curve.y, best_k, c).sse; }, 0.0, c_max, 60);
  }

  const LinearFit lin = solve_linear(curve.x, curve.y, best_k, best_c);
  WavenumberFit out;
  out.wavenumber = best_k;
  out.offset = lin.offset;
  out.amplitude = std::hypot(lin.bc, lin.bs);
  out.decay = best_c;
  out.phase = std::atan2(-lin.bs, lin.bc);
  out.visibility = lin.offset != 0 ? out.amplitude / lin.offset : 0.0;
  const double rms = std::sqrt(lin.sse / static_cast<double>(n));
  if (!(out.amplitude > 0)) throw FitFailure("extract_wavenumber: zero oscillation amplitude");
  out.residual = rms / out.amplitude;
  if (out.residual > 0.1)
    throw FitFailure("extract_wavenumber: rms residual " + std::to_string(out.residual) +
                     " of the amplitude exceeds 10%");
  return out;
}

}  // namespace qtoa

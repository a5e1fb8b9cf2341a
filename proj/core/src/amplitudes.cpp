#include "qtoa/amplitudes.hpp"

#include <cmath>
#include <numbers>

#include "qtoa/errors.hpp"
#include "qtoa/quadrature.hpp"

namespace qtoa {

namespace {
constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

void check_flavors(const WavePacketState& state, const MixingMatrix& u, int detection_flavor) {
  validate_state(state, u.dim());
  if (detection_flavor < 0 || detection_flavor >= u.dim())
    throw ValidationError("detection_flavor", "outside mixing-matrix dimension");
}
}  // namespace

std::complex<double> amplitude_no_dispersion(const WavePacketState& state, const MixingMatrix& u,
                                             int detection_flavor, double t, double x) {
  check_flavors(state, u, detection_flavor);
  const double sigma = state.sigma;
  const double xr = x - state.center;
  const double pref = std::pow(pi * sigma * sigma, -0.25);
  cplx sum(0.0, 0.0);
  for (int i = 0; i < state.spectrum.size(); ++i) {
    const auto& s = state.spectrum[i];
    const double E = state.spectrum.energy(i);
    const double v = state.spectrum.velocity(i);
    const double b = xr - v * t;
    const cplx coef = u(detection_flavor, i) * std::conj(u(state.production_flavor, i));
    sum += coef * std::exp(cplx(-b * b / (2 * sigma * sigma) - s.gamma * t,
                                s.momentum * xr - E * t));
  }
  return pref * sum;
}

std::complex<double> amplitude_dispersive(const WavePacketState& state, const MixingMatrix& u,
                                          int detection_flavor, double t, double x,
                                          const std::vector<double>& dgamma_dp) {
  check_flavors(state, u, detection_flavor);
  if (!dgamma_dp.empty() && static_cast<int>(dgamma_dp.size()) != state.spectrum.size())
    throw ValidationError("dgamma_dp", "size must match the spectrum");
  const double sigma = state.sigma;
  const double xr = x - state.center;
  const double pref = std::pow(sigma * sigma / pi, 0.25);
  cplx sum(0.0, 0.0);
  for (int i = 0; i < state.spectrum.size(); ++i) {
    const auto& s = state.spectrum[i];
    const double E = state.spectrum.energy(i);
    const double v = state.spectrum.velocity(i);
    const double mu = state.spectrum.dispersion_rate(i);
    const double dg = dgamma_dp.empty() ? 0.0 : dgamma_dp[i];
    const cplx width(sigma * sigma, mu * t);  // complex packet width, Re > 0
    const cplx arg(-dg * t, xr - v * t);      // i (xr - v t) - dgamma t
    const cplx coef = u(detection_flavor, i) * std::conj(u(state.production_flavor, i));
    sum += coef / std::sqrt(width) *
           std::exp(arg * arg / (2.0 * width) + cplx(-s.gamma * t, s.momentum * xr - E * t));
  }
  return pref * sum;
}

std::complex<double> amplitude_momentum_integral(const WavePacketState& state,
                                                 const MixingMatrix& u, int detection_flavor,
                                                 double t, double x, double rel_tol) {
  check_flavors(state, u, detection_flavor);
  const double sigma = state.sigma;
  const double xr = x - state.center;
  const double pref = std::pow(4 * pi * sigma * sigma, 0.25) / (2 * pi);
  cplx sum(0.0, 0.0);
  for (int i = 0; i < state.spectrum.size(); ++i) {
    const auto& s = state.spectrum[i];
    const double m = s.mass, pc = s.momentum;

    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    opts.breakpoints = {pc - 2 / sigma, pc, pc + 2 / sigma};
    // |d(phase)/dp| <= |xr| + |t|; two oscillation periods per panel.
    const double freq_bound = std::fabs(xr) + std::fabs(t);
    if (freq_bound > 0) opts.max_panel_width = 4 * pi / freq_bound;

    auto f = [&](double p) {
      const double q = p - pc;
      const double E = std::hypot(m, p);
      return std::exp(cplx(-sigma * sigma * q * q / 2.0, p * xr - E * t));
    };
    const cplx integral = integrate(f, pc - 8 / sigma, pc + 8 / sigma, opts);
    const cplx coef = u(detection_flavor, i) * std::conj(u(state.production_flavor, i));
    sum += coef * std::exp(-s.gamma * t) * integral;
  }
  return pref * sum;
}

double dispersion_parameter(const MassSpectrum& spectrum, int i, double sigma, double L) {
  if (!(sigma > 0)) throw ValidationError("sigma", "must be > 0");
  const double v = spectrum.velocity(i);
  if (!(v > 0)) throw ValidationError("spectrum", "needs forward motion for a flight time");
  return spectrum.dispersion_rate(i) * L / (v * sigma * sigma);
}

}  // namespace qtoa

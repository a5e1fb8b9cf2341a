#include "qtoa/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "qtoa/errors.hpp"
#include "qtoa/quadrature.hpp"

namespace qtoa {

namespace {
constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;
}  // namespace

MomentumWavefunction::MomentumWavefunction(std::function<cplx(double)> envelope, double p_min,
                                           double p_max, std::vector<double> breakpoints,
                                           double phase_distance)
    : envelope_(std::move(envelope)),
      p_min_(p_min),
      p_max_(p_max),
      breakpoints_(std::move(breakpoints)),
      x0_(phase_distance) {
  if (!(p_max_ > p_min_)) throw ValidationError("momentum_state", "empty momentum domain");
}

MomentumWavefunction MomentumWavefunction::from_samples(const std::vector<double>& p,
                                                        const std::vector<cplx>& values) {
  if (p.size() < 4) throw ValidationError("momentum_state", "need at least 4 samples");
  if (p.size() != values.size())
    throw ValidationError("momentum_state", "grid and value lists differ in length");
  for (size_t i = 1; i < p.size(); ++i)
    if (!(p[i] > p[i - 1]))
      throw ValidationError("momentum_state", "sample grid must be strictly increasing");

  auto grid = std::make_shared<std::vector<double>>(p);
  auto vals = std::make_shared<std::vector<cplx>>(values);
  // Catmull-Rom tangents, one-sided at the ends.
  auto tangents = std::make_shared<std::vector<cplx>>(p.size());
  const size_t n = p.size();
  (*tangents)[0] = ((*vals)[1] - (*vals)[0]) / (p[1] - p[0]);
  (*tangents)[n - 1] = ((*vals)[n - 1] - (*vals)[n - 2]) / (p[n - 1] - p[n - 2]);
  for (size_t i = 1; i + 1 < n; ++i)
    (*tangents)[i] = ((*vals)[i + 1] - (*vals)[i - 1]) / (p[i + 1] - p[i - 1]);

  auto eval = [grid, vals, tangents](double x) -> cplx {
    const auto& g = *grid;
    if (x <= g.front()) return vals->front();
    if (x >= g.back()) return vals->back();
    const size_t hi = static_cast<size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin());
    const size_t lo = hi - 1;
    const double h = g[hi] - g[lo];
    const double u = (x - g[lo]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * (*vals)[lo] + (u3 - 2 * u2 + u) * h * (*tangents)[lo] +
           (-2 * u3 + 3 * u2) * (*vals)[hi] + (u3 - u2) * h * (*tangents)[hi];
  };
  return MomentumWavefunction(eval, p.front(), p.back());
}

MomentumWavefunction MomentumWavefunction::gaussian(double a, double p_bar, double L) {
  if (!(a > 0)) throw ValidationError("momentum_state", "packet width must be > 0");
  const double amp = std::pow(a * a / (2 * pi), 0.25);
  auto env = [=](double p) {
    const double q = p - p_bar;
    return cplx(amp * std::exp(-a * a * q * q / 4.0), 0.0);
  };
  // Ladder of edges out to the domain boundary so no panel is ever much
  // wider than the envelope scale 1/a (a lone 15-point rule across a panel
  // that dwarfs the packet would alias the tail to zero).
  return MomentumWavefunction(env, p_bar - 8.0 / a, p_bar + 8.0 / a,
                              {p_bar - 4.0 / a, p_bar - 2.0 / a, p_bar, p_bar + 2.0 / a,
                               p_bar + 4.0 / a},
                              L);
}

double MomentumWavefunction::norm(double rel_tol) const {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.breakpoints = breakpoints_;
  // |exp(i p x0)| = 1, so the norm only sees the envelope.
  auto f = [this](double p) { return std::norm(envelope_(p)); };
  return integrate(f, p_min_, p_max_, opts);
}

double TwoPacketSpec::classical_arrival() const {
  return 2.0 * distance * mass / (p_bar1 + p_bar2);
}

double TwoPacketSpec::beat_frequency() const {
  return std::fabs(p_bar1 * p_bar1 - p_bar2 * p_bar2) / (2.0 * mass);
}

bool TwoPacketSpec::packets_resolved() const {
  return a * std::fabs(p_bar1 - p_bar2) >= 10.0;
}

MomentumWavefunction TwoPacketSpec::state() const {
  if (!(a > 0)) throw ValidationError("two_packet", "packet width must be > 0");
  if (!(mass > 0)) throw ValidationError("two_packet", "mass must be > 0");
  const double amp = std::pow(a * a / (8 * pi), 0.25);
  const double aa = a, p1 = p_bar1, p2 = p_bar2;
  auto env = [=](double p) {
    const double q1 = p - p1, q2 = p - p2;
    return cplx(amp * (std::exp(-aa * aa * q1 * q1 / 4.0) +
                       std::exp(-aa * aa * q2 * q2 / 4.0)),
                0.0);
  };
  const double lo = std::min(p1, p2) - 8.0 / a;
  const double hi = std::max(p1, p2) + 8.0 / a;
  std::vector<double> edges;
  for (double c : {p1, p2})
    for (int k = -6; k <= 6; k += 2) edges.push_back(c + k / a);
  return MomentumWavefunction(env, lo, hi, edges, distance);
}

namespace {

// Right- or left-moving half-line amplitude at time t, up to a constant
// phase.  The positional and free-evolution phases are combined relative to
// the interval midpoint: theta(p) - theta(p0) = (p - p0)(x0 - (p + p0)t/2M).
// Written this way the evaluated phase stays small wherever the integral has
// weight, instead of being the ~1e-9-noisy difference of two ~1e7 rad terms.
cplx half_line_amplitude(const MomentumWavefunction& psi, double mass, double t, bool right,
                         double rel_tol) {
  double lo = psi.p_min(), hi = psi.p_max();
  if (right)
    lo = std::max(lo, 0.0);
  else
    hi = std::min(hi, 0.0);
  if (!(hi > lo)) return cplx(0.0, 0.0);

  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.breakpoints = psi.breakpoints();
  // Residual chirp after factoring the midpoint phase: d(theta)/dp =
  // x0 - p t / M, largest at the interval ends.  Half a period per panel
  // keeps the rule inside its resolving power; refinement does the rest.
  const double x0 = psi.phase_distance();
  const double grad = std::max(std::fabs(x0 - lo * t / mass), std::fabs(x0 - hi * t / mass));
  if (grad > 0.0) opts.max_panel_width = pi / grad;

  const double p0 = 0.5 * (lo + hi);
  auto f = [&psi, mass, t, x0, p0](double p) {
    const double q = p - p0;
    const double theta = q * (x0 - (p + p0) * t / (2 * mass));
    return std::sqrt(std::fabs(p) / (2 * pi * mass)) * psi.envelope(p) *
           std::polar(1.0, theta);
  };
  return integrate(f, lo, hi, opts);
}

}  // namespace

double arrival_time_pdf(const MomentumWavefunction& psi, double mass, double t, double rel_tol) {
  if (!(mass > 0)) throw ValidationError("arrival", "mass must be > 0");
  const cplx plus = half_line_amplitude(psi, mass, t, true, rel_tol);
  const cplx minus = half_line_amplitude(psi, mass, t, false, rel_tol);
  return std::norm(plus) + std::norm(minus);
}

double arrival_probability(const MomentumWavefunction& psi, double mass, double t_lo, double t_hi,
                           double rel_tol, const std::vector<double>& t_breakpoints) {
  if (!(t_hi > t_lo)) throw ValidationError("arrival", "time window out of order");
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.breakpoints = t_breakpoints;
  // A floor of 64 panels so a narrow arrival bump inside a wide window cannot
  // hide between the nodes of one huge panel.
  opts.max_panel_width = (t_hi - t_lo) / 64.0;
  auto f = [&psi, mass, rel_tol](double t) {
    return arrival_time_pdf(psi, mass, t, 0.1 * rel_tol);
  };
  return integrate(f, t_lo, t_hi, opts);
}

double no_detection_probability(const MomentumWavefunction& psi, double mass, double t_lo,
                                double t_hi, double rel_tol,
                                const std::vector<double>& t_breakpoints) {
  return 1.0 - arrival_probability(psi, mass, t_lo, t_hi, rel_tol, t_breakpoints);
}

double two_packet_arrival_pdf(const TwoPacketSpec& spec, double t) {
  if (!(spec.mass > 0)) throw ValidationError("two_packet", "mass must be > 0");
  if (!(spec.a > 0)) throw ValidationError("two_packet", "packet width must be > 0");
  const double M = spec.mass, a = spec.a, L = spec.distance;
  const double p1 = spec.p_bar1, p2 = spec.p_bar2;
  const double b1 = L - p1 * t / M;
  const double b2 = L - p2 * t / M;
  const double e1 = std::exp(-2.0 * b1 * b1 / (a * a));
  const double e2 = std::exp(-2.0 * b2 * b2 / (a * a));
  const double cross = std::sqrt(p1 * p2) * std::exp(-(b1 * b1 + b2 * b2) / (a * a)) *
                       std::cos((p1 - p2) * (L - (p1 + p2) * t / (2.0 * M)));
  return std::sqrt(2.0 / pi) / (M * a) * (0.5 * p1 * e1 + 0.5 * p2 * e2 + cross);
}

}  // namespace qtoa

#include "qtoa/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtoa/amplitudes.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/quadrature.hpp"

namespace qtoa {

namespace {
constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

void require_forward(const MassSpectrum& s, const char* who) {
  for (int i = 0; i < s.size(); ++i)
    if (!(s.velocity(i) > 0))
      throw ValidationError(who, "every mass eigenstate must move toward the detector (p > 0)");
}

void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

struct EngineContext {
  const WavePacketState* state = nullptr;
  const MixingMatrix* u = nullptr;
  KernelSpec kernel;
  double L = 0;      // detector position
  double L_eff = 0;  // flight distance, detector position minus packet centre
  double eps = 0;
  double tau_dec = 0, tau_sup = 0;
  int alpha = 0, beta = 0, n = 0;
  std::vector<double> E, v, p, gamma;
  double v_min = 0, v_max = 0;
  double dt_max = 0;  // largest arrival-time splitting
  double sigma = 0;
  bool saddle_ok = true;
};

EngineContext make_context(const WavePacketState& state, const MixingMatrix& u,
                           const DetectionChannel& channel, const ExperimentGeometry& geometry) {
  validate_mixing_matrix(u);
  validate_state(state, u.dim());
  validate_channel(channel, u.dim());
  if (!std::isfinite(geometry.distance))
    throw ValidationError("geometry.distance", "must be finite");
  require_forward(state.spectrum, "spectrum");

  EngineContext ctx;
  ctx.state = &state;
  ctx.u = &u;
  ctx.kernel = KernelSpec::from_channel(channel);
  ctx.L = geometry.distance;
  ctx.L_eff = geometry.distance - state.center;
  if (!(ctx.L_eff > 0))
    throw ValidationError("geometry.distance", "detector must sit ahead of the packet");
  ctx.eps = channel.epsilon_th;
  ctx.tau_dec = channel.tau_dec;
  ctx.tau_sup = channel.tau_sup();
  ctx.alpha = channel.detection_flavor;
  ctx.beta = state.production_flavor;
  ctx.n = state.spectrum.size();
  ctx.sigma = state.sigma;
  ctx.v_min = 1.0;
  ctx.v_max = 0.0;
  for (int i = 0; i < ctx.n; ++i) {
    ctx.E.push_back(state.spectrum.energy(i));
    ctx.v.push_back(state.spectrum.velocity(i));
    ctx.p.push_back(state.spectrum[i].momentum);
    ctx.gamma.push_back(state.spectrum[i].gamma);
    ctx.v_min = std::min(ctx.v_min, ctx.v.back());
    ctx.v_max = std::max(ctx.v_max, ctx.v.back());
  }
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i + 1; j < ctx.n; ++j)
      ctx.dt_max = std::max(ctx.dt_max,
                            std::fabs(ctx.L_eff / ctx.v[i] - ctx.L_eff / ctx.v[j]));
  ctx.saddle_ok = ctx.kernel.saddle_point_ok();
  return ctx;
}

cplx mixing_coeff(const EngineContext& ctx, int i, int j) {
  const MixingMatrix& u = *ctx.u;
  const cplx ci = u(ctx.alpha, i) * std::conj(u(ctx.beta, i));
  const cplx cj = u(ctx.alpha, j) * std::conj(u(ctx.beta, j));
  return ci * std::conj(cj);
}

bool separation_regime_ok(const EngineContext& ctx) {
  return ctx.dt_max <= 0.1 * std::min(ctx.tau_dec, ctx.tau_sup);
}

void append_regime_flags(const EngineContext& ctx, std::vector<std::string>& flags) {
  if (!ctx.saddle_ok) add_flag(flags, "saddle-point-degraded");
  for (int i = 0; i < ctx.n; ++i)
    if (dispersion_parameter(ctx.state->spectrum, i, ctx.sigma, ctx.L_eff) > 0.1) {
      add_flag(flags, "dispersive-regime");
      break;
    }
}

// Oscillation frequency (rad per unit of the coherence variable) of the pair
// phase plus the slow phase of the product kernel near its core.
double coherence_axis_frequency(const EngineContext& ctx) {
  double f = 0;
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i; j < ctx.n; ++j)
      f = std::max(f, std::fabs(0.5 * (ctx.E[i] + ctx.E[j]) - ctx.eps));
  f += 1.5 * static_cast<double>(ctx.kernel.product_masses.size()) / ctx.tau_sup;
  return f;
}

// Exact Gaussian mean-time integral of the (i, j) two-time coherence,
// integrated against the kernel over the coherence variable.  Includes the
// sqrt(2 / V^2) prefactor but not the mixing coefficients or the
// exp(i (p_i - p_j) L) momentum phase.
cplx pair_kernel_integral(const EngineContext& ctx, const EngineOptions& opts, int i, int j) {
  const double vi = ctx.v[i], vj = ctx.v[j];
  const double V2 = vi * vi + vj * vj;
  const double s2 = ctx.sigma * ctx.sigma;
  const cplx z(ctx.gamma[i] + ctx.gamma[j], ctx.E[i] - ctx.E[j]);
  const cplx zz_term = s2 * z * z / (2.0 * V2);

  const double xi_center = -(vj - vi) * ctx.L_eff / (vi * vj);
  const double xi_width = ctx.sigma * std::sqrt(V2) / (vi * vj);
  const double kernel_window = opts.kernel_widths * ctx.tau_dec;

  const double lo = std::max(-kernel_window, xi_center - opts.envelope_widths * xi_width);
  const double hi = std::min(kernel_window, xi_center + opts.envelope_widths * xi_width);
  if (!(hi > lo)) return cplx(0.0, 0.0);  // envelope and kernel supports miss

  QuadratureOptions q;
  q.rel_tol = 1e-8;
  q.max_panels = opts.max_panels;
  q.breakpoints = {0.0,       ctx.tau_sup,  -ctx.tau_sup, 4 * ctx.tau_sup, -4 * ctx.tau_sup,
                   xi_center, xi_center - xi_width, xi_center + xi_width};
  const double freq = coherence_axis_frequency(ctx);
  if (freq > 0) q.max_panel_width = 2 * pi / (opts.points_per_period * freq);

  const double Leff = ctx.L_eff;
  const double Ei = ctx.E[i], Ej = ctx.E[j];
  const double gi = ctx.gamma[i], gj = ctx.gamma[j];
  const double eps = ctx.eps;
  const KernelSpec& kernel = ctx.kernel;
  auto f = [=, &kernel](double xi) {
    const double u0 = ((vi + vj) * Leff + 0.5 * (vi * vi - vj * vj) * xi) / V2;
    const double env = (vj - vi) * Leff + vi * vj * xi;
    cplx expo(-env * env / (2.0 * s2 * V2) + 0.5 * (gi - gj) * xi,
              (0.5 * (Ei + Ej) - eps) * xi);
    expo += zz_term - z * u0;
    return coherence_kernel(xi, kernel) * std::exp(expo);
  };
  return std::sqrt(2.0 / V2) * integrate(f, lo, hi, q);
}

OscillationResult closed_general(const EngineContext& ctx, const EngineOptions& opts) {
  OscillationResult r;
  r.terms.diagonal.assign(static_cast<size_t>(ctx.n), 0.0);
  double diag_sum = 0, osc_sum = 0;
  for (int i = 0; i < ctx.n; ++i) {
    const cplx raw = pair_kernel_integral(ctx, opts, i, i);
    if (std::fabs(raw.imag()) > 1e-6 * std::fabs(raw.real()) + 1e-30)
      throw NumericError("closed general: diagonal term has a spurious imaginary part");
    const double si = mixing_coeff(ctx, i, i).real() * raw.real();
    r.terms.diagonal[static_cast<size_t>(i)] = si;
    diag_sum += si;
  }
  for (int i = 0; i < ctx.n; ++i) {
    for (int j = i + 1; j < ctx.n; ++j) {
      const cplx raw = pair_kernel_integral(ctx, opts, i, j);
      const cplx phase = std::exp(cplx(0.0, (ctx.p[i] - ctx.p[j]) * ctx.L_eff));
      const cplx coeff = mixing_coeff(ctx, i, j) * phase * raw;
      r.terms.pairs.push_back(
          {i, j, coeff, oscillation_wavenumber(ctx.state->spectrum, i, j, ctx.eps)});
      osc_sum += 2.0 * coeff.real();
    }
  }
  r.value = diag_sum + osc_sum;
  if (r.value < -1e-9 * std::max(diag_sum, 1e-300))
    throw NumericError("closed general: probability is negative beyond tolerance");
  append_regime_flags(ctx, r.flags);
  return r;
}

OscillationResult closed_simplified(const EngineContext& ctx, const EngineOptions& opts) {
  OscillationResult r;
  if (!separation_regime_ok(ctx)) {
    const std::string msg =
        "arrival-time splitting " + std::to_string(ctx.dt_max) +
        " exceeds 0.1 x min(tau_dec, tau_sup) = " +
        std::to_string(0.1 * std::min(ctx.tau_dec, ctx.tau_sup)) +
        "; the simplified closed form assumes unresolved packets";
    if (opts.enforce_regime) throw RegimeViolation(msg);
    add_flag(r.flags, "separation-regime");
  }
  r.terms.diagonal.assign(static_cast<size_t>(ctx.n), 0.0);
  double diag_sum = 0, osc_sum = 0;
  for (int i = 0; i < ctx.n; ++i) {
    const double si = mixing_coeff(ctx, i, i).real() *
                      std::exp(-2.0 * ctx.gamma[i] * ctx.L_eff / ctx.v[i]);
    r.terms.diagonal[static_cast<size_t>(i)] = si;
    diag_sum += si;
  }
  for (int i = 0; i < ctx.n; ++i) {
    for (int j = i + 1; j < ctx.n; ++j) {
      const double k = oscillation_wavenumber(ctx.state->spectrum, i, j, ctx.eps);
      const double decay = (ctx.gamma[i] / ctx.v[i] + ctx.gamma[j] / ctx.v[j]) * ctx.L_eff;
      const cplx coeff =
          mixing_coeff(ctx, i, j) * std::exp(cplx(-decay, k * ctx.L_eff));
      r.terms.pairs.push_back({i, j, coeff, k});
      osc_sum += 2.0 * coeff.real();
    }
  }
  r.value = diag_sum + osc_sum;
  if (r.value < -1e-9 * std::max(diag_sum, 1e-300))
    throw NumericError("closed simplified: probability is negative beyond tolerance");
  append_regime_flags(ctx, r.flags);
  return r;
}

OscillationResult numeric_engine(const EngineContext& ctx, const EngineOptions& opts) {
  const double sigma = ctx.sigma;
  // Coherence window: the record kernel dies within kernel_widths * tau_dec,
  // and the envelope product dies once the offset exceeds every arrival-time
  // splitting plus the packet passage time.  Either bound alone is valid;
  // the product-phase kernel has power-law tails and never provides one.
  const double xi_env = ctx.dt_max + 1.4 * opts.envelope_widths * sigma / ctx.v_min;
  const double xi_cut = std::min(opts.kernel_widths * ctx.tau_dec, xi_env);
  const double u_lo = ctx.L_eff / ctx.v_max - opts.envelope_widths * sigma / ctx.v_min -
                      0.5 * xi_cut;
  const double u_hi = ctx.L_eff / ctx.v_min + opts.envelope_widths * sigma / ctx.v_min +
                      0.5 * xi_cut;

  double f_u = 0;
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i + 1; j < ctx.n; ++j) f_u = std::max(f_u, std::fabs(ctx.E[i] - ctx.E[j]));
  const double f_xi = coherence_axis_frequency(ctx);

  std::vector<double> u_breaks;
  for (int i = 0; i < ctx.n; ++i) {
    const double ti = ctx.L_eff / ctx.v[i];
    u_breaks.insert(u_breaks.end(),
                    {ti, ti - 2 * sigma / ctx.v[i], ti + 2 * sigma / ctx.v[i]});
  }
  std::vector<double> xi_breaks = {0.0, ctx.tau_sup, -ctx.tau_sup, 4 * ctx.tau_sup,
                                   -4 * ctx.tau_sup};
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i + 1; j < ctx.n; ++j) {
      const double dt = ctx.L_eff / ctx.v[i] - ctx.L_eff / ctx.v[j];
      xi_breaks.push_back(dt);
      xi_breaks.push_back(-dt);
    }

  const WavePacketState& state = *ctx.state;
  const MixingMatrix& u = *ctx.u;
  auto amp = [&](double t) {
    return opts.dispersive_amplitude
               ? amplitude_dispersive(state, u, ctx.alpha, t, ctx.L)
               : amplitude_no_dispersion(state, u, ctx.alpha, t, ctx.L);
  };

  QuadratureOptions inner_opts;
  inner_opts.rel_tol = 1e-2 * opts.rel_tol;
  inner_opts.max_panels = opts.max_panels;
  inner_opts.breakpoints = u_breaks;
  if (f_u > 0) inner_opts.max_panel_width = 2 * pi / (opts.points_per_period * f_u);

  QuadratureOptions outer_opts;
  outer_opts.rel_tol = opts.rel_tol;
  outer_opts.max_panels = opts.max_panels;
  outer_opts.breakpoints = xi_breaks;
  if (f_xi > 0) outer_opts.max_panel_width = 2 * pi / (opts.points_per_period * f_xi);

  const double eps = ctx.eps;
  const KernelSpec& kernel = ctx.kernel;
  auto outer = [&](double xi) {
    auto pair_coherence = [&](double uu) { return amp(uu - 0.5 * xi) * std::conj(amp(uu + 0.5 * xi)); };
    const cplx inner = integrate(pair_coherence, u_lo, u_hi, inner_opts);
    return inner * coherence_kernel(xi, kernel) * std::exp(cplx(0.0, -eps * xi));
  };
  const cplx total = integrate(outer, -xi_cut, xi_cut, outer_opts);

  // Non-oscillating baseline for the residual checks.
  double baseline = 0;
  for (int i = 0; i < ctx.n; ++i)
    baseline += mixing_coeff(ctx, i, i).real() * pair_kernel_integral(ctx, opts, i, i).real();
  baseline = std::max(baseline, 1e-300);

  if (std::fabs(total.imag()) > 1e-8 * baseline)
    throw NumericError("numeric path: imaginary residual " + std::to_string(total.imag()) +
                       " exceeds 1e-8 of the baseline " + std::to_string(baseline));
  if (total.real() < -1e-9 * baseline)
    throw NumericError("numeric path: probability is negative beyond tolerance");

  OscillationResult r;
  r.value = total.real();
  append_regime_flags(ctx, r.flags);
  return r;
}

}  // namespace

double oscillation_wavenumber(const MassSpectrum& spectrum, int i, int j, double epsilon_th) {
  if (i == j) return 0.0;
  require_forward(spectrum, "spectrum");
  const double Ei = spectrum.energy(i), Ej = spectrum.energy(j);
  const double pi_ = spectrum[i].momentum, pj = spectrum[j].momentum;
  // (E - eps) / v = E (E - eps) / p
  return (Ei * (Ei - epsilon_th) / pi_ - Ej * (Ej - epsilon_th) / pj) - (pi_ - pj);
}

double oscillation_wavenumber_ur(const MassSpectrum& spectrum, int i, int j, double epsilon_th) {
  if (i == j) return 0.0;
  const double mi = spectrum[i].mass, mj = spectrum[j].mass;
  const double Ebar = 0.5 * (spectrum.energy(i) + spectrum.energy(j));
  const double dm2 = (mi - mj) * (mi + mj);
  return (1.0 - epsilon_th / (2.0 * Ebar)) * dm2 / Ebar;
}

double oscillation_wavenumber_ur_p(const MassSpectrum& spectrum, int i, int j, double epsilon_th) {
  if (i == j) return 0.0;
  const double mi = spectrum[i].mass, mj = spectrum[j].mass;
  const double Ebar = 0.5 * (spectrum.energy(i) + spectrum.energy(j));
  const double pbar = 0.5 * (spectrum[i].momentum + spectrum[j].momentum);
  if (!(pbar > 0)) throw ValidationError("spectrum", "mean momentum must be > 0");
  const double dm2 = (mi - mj) * (mi + mj);
  return (1.0 - epsilon_th / (2.0 * pbar)) * dm2 / Ebar;
}

double standard_wavenumber(const MassSpectrum& spectrum, int i, int j) {
  if (i == j) return 0.0;
  const double mi = spectrum[i].mass, mj = spectrum[j].mass;
  const double psum = spectrum[i].momentum + spectrum[j].momentum;
  if (!(psum > 0)) throw ValidationError("spectrum", "momentum sum must be > 0");
  return (mi - mj) * (mi + mj) / psum;
}

OscillationResult detection_probability_numeric(const WavePacketState& state,
                                                const MixingMatrix& u,
                                                const DetectionChannel& channel,
                                                const ExperimentGeometry& geometry,
                                                const EngineOptions& opts) {
  return numeric_engine(make_context(state, u, channel, geometry), opts);
}

OscillationResult detection_probability_closed(const WavePacketState& state,
                                               const MixingMatrix& u,
                                               const DetectionChannel& channel,
                                               const ExperimentGeometry& geometry,
                                               ClosedFormMode mode, const EngineOptions& opts) {
  const EngineContext ctx = make_context(state, u, channel, geometry);
  return mode == ClosedFormMode::general ? closed_general(ctx, opts)
                                         : closed_simplified(ctx, opts);
}

std::vector<std::string> regime_flags(const WavePacketState& state, const MixingMatrix& u,
                                      const DetectionChannel& channel,
                                      const ExperimentGeometry& geometry) {
  const EngineContext ctx = make_context(state, u, channel, geometry);
  std::vector<std::string> flags;
  append_regime_flags(ctx, flags);
  if (!separation_regime_ok(ctx)) add_flag(flags, "separation-regime");
  return flags;
}

OscillationResult detection_probability(const WavePacketState& state, const MixingMatrix& u,
                                        const DetectionChannel& channel,
                                        const ExperimentGeometry& geometry, ProbabilityPath path,
                                        const EngineOptions& opts) {
  switch (path) {
    case ProbabilityPath::numeric:
      return detection_probability_numeric(state, u, channel, geometry, opts);
    case ProbabilityPath::closed_general:
      return detection_probability_closed(state, u, channel, geometry, ClosedFormMode::general,
                                          opts);
    case ProbabilityPath::closed_simplified:
      return detection_probability_closed(state, u, channel, geometry,
                                          ClosedFormMode::simplified, opts);
  }
  throw Error("unknown probability path");
}

MixedResult mixed_state_probability(const MassSpectrum& template_spectrum,
                                    const MixedInitialState& mix, const MixingMatrix& u,
                                    int production_flavor, const DetectionChannel& channel,
                                    const ExperimentGeometry& geometry, ProbabilityPath path,
                                    const EngineOptions& opts) {
  if (mix.components.empty())
    throw ValidationError("mixed.components", "needs at least one component");
  if (!(mix.sigma > 0)) throw ValidationError("mixed.sigma", "must be > 0");
  double wsum = 0;
  for (const auto& c : mix.components) {
    if (!(c.weight > 0)) throw ValidationError("mixed.components", "weights must be > 0");
    if (!(c.momentum > 0)) throw ValidationError("mixed.components", "momenta must be > 0");
    wsum += c.weight;
  }
  if (std::fabs(wsum - 1.0) > 1e-12)
    throw ValidationError("mixed.components", "weights must sum to 1");

  std::vector<double> masses, gammas;
  for (const auto& s : template_spectrum.states()) {
    masses.push_back(s.mass);
    gammas.push_back(s.gamma);
  }

  MixedResult out;
  for (const auto& c : mix.components) {
    const MassSpectrum spec = MassSpectrum::equal_momentum(masses, c.momentum, gammas);
    const WavePacketState state{spec, mix.sigma, production_flavor, 0.0};
    const ExperimentGeometry g{geometry.distance + c.center_shift, geometry.horizon};
    const OscillationResult r = detection_probability(state, u, channel, g, path, opts);
    out.result.value += c.weight * r.value;
    for (const auto& f : r.flags) add_flag(out.result.flags, f);
  }

  double p_mean = 0, p_lo = mix.components.front().momentum, p_hi = p_lo;
  double q_lo = mix.components.front().center_shift, q_hi = q_lo;
  for (const auto& c : mix.components) {
    p_mean += c.weight * c.momentum;
    p_lo = std::min(p_lo, c.momentum);
    p_hi = std::max(p_hi, c.momentum);
    q_lo = std::min(q_lo, c.center_shift);
    q_hi = std::max(q_hi, c.center_shift);
  }
  const MassSpectrum mean_spec = MassSpectrum::equal_momentum(masses, p_mean, gammas);
  double spread = 0;
  for (int i = 0; i < mean_spec.size(); ++i)
    for (int j = i + 1; j < mean_spec.size(); ++j) {
      const double k = std::fabs(oscillation_wavenumber(mean_spec, i, j, channel.epsilon_th));
      spread = std::max(
          spread, k * ((q_hi - q_lo) + geometry.distance * (p_hi - p_lo) / p_mean));
    }
  out.phase_spread = spread;
  out.visibility_degraded = spread > 0.3;
  if (out.visibility_degraded) add_flag(out.result.flags, "mixed-phase-spread");
  return out;
}

OscillationResult multi_channel_probability(const WavePacketState& state, const MixingMatrix& u,
                                            const std::vector<WeightedChannel>& channels,
                                            const ExperimentGeometry& geometry,
                                            ProbabilityPath path, const EngineOptions& opts) {
  if (channels.empty()) throw ValidationError("channels", "needs at least one channel");
  OscillationResult total;
  for (const auto& wc : channels) {
    if (!(wc.weight > 0)) throw ValidationError("channels", "weights must be > 0");
    const OscillationResult r = detection_probability(state, u, wc.channel, geometry, path, opts);
    total.value += wc.weight * r.value;
    if (!r.terms.diagonal.empty()) {
      if (total.terms.diagonal.empty())
        total.terms.diagonal.assign(r.terms.diagonal.size(), 0.0);
      for (size_t i = 0; i < r.terms.diagonal.size(); ++i)
        total.terms.diagonal[i] += wc.weight * r.terms.diagonal[i];
    }
    for (const auto& pt : r.terms.pairs)
      total.terms.pairs.push_back({pt.i, pt.j, wc.weight * pt.coeff, pt.wavenumber});
    for (const auto& f : r.flags) add_flag(total.flags, f);
  }
  return total;
}

Curve gaussian_smear(const Curve& curve, double width) {
  validate_curve(curve);
  if (!(width > 0)) return curve;
  const size_t n = curve.x.size();
  if (n < 2) return curve;
  const double h = curve.x[1] - curve.x[0];
  const double span = curve.x.back() - curve.x.front();
  for (size_t i = 1; i < n; ++i)
    if (std::fabs((curve.x[i] - curve.x[i - 1]) - h) > 1e-9 * span)
      throw GridMismatch("gaussian_smear: grid is not uniform");

  const long R = static_cast<long>(std::ceil(6.0 * width / h));
  std::vector<double> w(static_cast<size_t>(R) + 1);
  for (long r = 0; r <= R; ++r) {
    const double u = static_cast<double>(r) * h / width;
    w[static_cast<size_t>(r)] = std::exp(-0.5 * u * u);
  }
  Curve out = curve;
  for (size_t k = 0; k < n; ++k) {
    double acc = 0, norm = 0;
    for (long r = -R; r <= R; ++r) {
      const long idx = static_cast<long>(k) + r;
      if (idx < 0 || idx >= static_cast<long>(n)) continue;
      const double wr = w[static_cast<size_t>(std::labs(r))];
      acc += wr * curve.y[static_cast<size_t>(idx)];
      norm += wr;
    }
    out.y[k] = acc / norm;
  }
  out.meta.model = curve.meta.model.empty() ? "smeared" : curve.meta.model + "-smeared";
  return out;
}

Curve sampling_smear(const Curve& curve, double delta_L, double s_p) {
  switch (curve.meta.x_kind) {
    case AxisKind::length:
    case AxisKind::time:
      return gaussian_smear(curve, delta_L);
    case AxisKind::momentum:
    case AxisKind::energy:
      return gaussian_smear(curve, s_p);
    case AxisKind::dimensionless:
      break;
  }
  throw ValidationError("sampling_smear", "curve axis has no physical resolution width");
}

}  // namespace qtoa

#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qtoa {

// A one-dimensional momentum-space wavefunction, either analytic or sampled.
// Sampled states are interpolated with a cubic Hermite spline and carry their
// grid extent as the integration domain; analytic states declare a domain
// chosen to hold all but ~1e-10 of their norm.
//
// The full wavefunction is envelope(p) * exp(i p x0).  The travel-distance
// phase is kept symbolic rather than folded into the envelope because at
// macroscopic x0 it reaches ~1e7 radians: evaluated numerically it nearly
// cancels against the free-evolution phase and its rounding noise (~eps |p x0|)
// would cap every downstream integral at ~9 significant digits.
class MomentumWavefunction {
 public:
  MomentumWavefunction(std::function<std::complex<double>(double)> envelope, double p_min,
                       double p_max, std::vector<double> breakpoints = {},
                       double phase_distance = 0.0);

  // Cubic interpolation through (p, value) samples on a strictly increasing
  // grid.  Throws ValidationError for fewer than 4 points or a non-monotonic
  // grid.  Samples are taken as the full wavefunction (phase_distance 0).
  static MomentumWavefunction from_samples(const std::vector<double>& p,
                                           const std::vector<std::complex<double>>& values);

  // Normalized Gaussian of spatial width a centred at momentum p_bar, placed
  // a distance L to the left of the detector.
  static MomentumWavefunction gaussian(double a, double p_bar, double L);

  std::complex<double> operator()(double p) const {
    return envelope_(p) * std::polar(1.0, p * x0_);
  }
  std::complex<double> envelope(double p) const { return envelope_(p); }
  double phase_distance() const { return x0_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  // integral of |psi|^2 over the domain
  double norm(double rel_tol = 1e-10) const;

 private:
  std::function<std::complex<double>(double)> envelope_;
  double p_min_, p_max_;
  std::vector<double> breakpoints_;
  double x0_ = 0.0;
};

// Equal-mean superposition of two momentum Gaussians of common spatial width
// a, both a distance L from the detector, for a particle of mass M.
struct TwoPacketSpec {
  double mass = 0;
  double distance = 0;
  double a = 1.0;
  double p_bar1 = 0;
  double p_bar2 = 0;

  // Arrival time of the mean classical trajectory, 2 L M / (p1 + p2).
  double classical_arrival() const;
  // Beat frequency of the arrival-time interference, |p1^2 - p2^2| / (2M).
  double beat_frequency() const;
  // The packets stop overlapping in momentum once a |p1 - p2| >> 1.
  bool packets_resolved() const;

  MomentumWavefunction state() const;
};

// Arrival-time density at the detector for a free particle of mass M: the
// squared right-moving and left-moving half-line projections of the state,
// each weighted by sqrt(|p| / 2 pi M) and the free evolution phase.  For a
// state supported on p > 0 the density integrates to exactly 1 over all t.
double arrival_time_pdf(const MomentumWavefunction& psi, double mass, double t,
                        double rel_tol = 1e-8);

// Integral of the arrival density over [t_lo, t_hi].  Pass the expected
// classical arrival times as breakpoints when the window dwarfs the envelope.
double arrival_probability(const MomentumWavefunction& psi, double mass, double t_lo, double t_hi,
                           double rel_tol = 1e-6, const std::vector<double>& t_breakpoints = {});

// 1 - arrival_probability: the no-detection weight for a finite observation
// window, obtained by subtraction.
double no_detection_probability(const MomentumWavefunction& psi, double mass, double t_lo,
                                double t_hi, double rel_tol = 1e-6,
                                const std::vector<double>& t_breakpoints = {});

// Closed-form arrival density of the two-packet state in the long-distance,
// narrow-packet regime: two Gaussian envelopes in t plus an interference
// term oscillating at beat_frequency(), with the cosine argument vanishing
// at classical_arrival().
double two_packet_arrival_pdf(const TwoPacketSpec& spec, double t);

}  // namespace qtoa

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qtoa/curve.hpp"
#include "qtoa/kernels.hpp"
#include "qtoa/types.hpp"

namespace qtoa {

// Oscillation wavenumber of the pair (i, j) for a detector with energy
// threshold epsilon_th, without kinematic approximations:
//   k_ij = (E_i - eps) / v_i - (E_j - eps) / v_j - (p_i - p_j).
// Antisymmetric in (i, j) and exactly zero on the diagonal.
double oscillation_wavenumber(const MassSpectrum& spectrum, int i, int j, double epsilon_th);

// Ultra-relativistic expansions of the same quantity,
//   (1 - eps / 2E) (m_i^2 - m_j^2) / E   and   (1 - eps / 2p) (m_i^2 - m_j^2) / E,
// with E and p the pair means.  At eps = 0 both give twice the textbook value.
double oscillation_wavenumber_ur(const MassSpectrum& spectrum, int i, int j, double epsilon_th);
double oscillation_wavenumber_ur_p(const MassSpectrum& spectrum, int i, int j, double epsilon_th);

// Textbook wavenumber (m_i^2 - m_j^2) / (p_i + p_j), signed.
double standard_wavenumber(const MassSpectrum& spectrum, int i, int j);

// One interference term of a detection probability.  The probability is
//   sum_i diagonal[i] + sum_{i<j} 2 Re(pairs.coeff),
// where coeff carries mixing factors, decay and kernel attenuation at the
// evaluated distance; wavenumber is the rate of phase advance in L.
struct PairTerm {
  int i = 0, j = 0;
  std::complex<double> coeff;
  double wavenumber = 0;
};

struct OscillationTerms {
  std::vector<double> diagonal;
  std::vector<PairTerm> pairs;
};

struct OscillationResult {
  double value = 0;
  OscillationTerms terms;          // filled by the closed-form paths
  std::vector<std::string> flags;  // regime warnings, never errors
};

enum class ClosedFormMode { general, simplified };
enum class ProbabilityPath { numeric, closed_general, closed_simplified };

struct EngineOptions {
  double rel_tol = 1e-6;          // numeric path, per integration axis
  double points_per_period = 20;  // step bound on oscillatory axes
  double envelope_widths = 10;    // window padding in units of the packet width
  double kernel_widths = 12;      // coherence window in units of tau_dec
  int max_panels = 200000;
  bool enforce_regime = true;     // RegimeViolation vs flag outside the
                                  // simplified-form validity regime
  bool dispersive_amplitude = false;  // spread packets in the numeric path
};

// Detection probability at geometry.distance by direct quadrature of the
// two-time coherence against the kernel: with A the flavor amplitude at the
// detector and F the coherence kernel,
//   p = integral du dxi A(u - xi/2) conj(A(u + xi/2)) exp(-i eps xi) F(xi),
// evaluated adaptively in the rotated coordinates with windows set by the
// packet envelopes and by the kernel decay (the coherence variable is cut at
// the smaller of kernel_widths * tau_dec and the envelope-support bound; the
// product-phase kernel decays too slowly to cut on its own).  The imaginary
// part must fall below 1e-8 of the non-oscillating baseline and is then
// discarded; the value may undershoot zero by at most 1e-9 of the baseline.
OscillationResult detection_probability_numeric(const WavePacketState& state,
                                                const MixingMatrix& u,
                                                const DetectionChannel& channel,
                                                const ExperimentGeometry& geometry,
                                                const EngineOptions& opts = {});

// Closed-form evaluation.
//
// general: the inner (mean-time) integral is Gaussian and done exactly; the
// coherence variable is integrated against the kernel per term, keeping
// per-term threshold attenuation, envelope overlap and decay.  Valid in the
// no-dispersion regime.
//
// simplified: additionally assumes every arrival-time splitting is well
// inside the kernel coherence window (|t_i - t_j| <= 0.1 min(tau_dec,
// tau_sup), else RegimeViolation or a "separation-regime" flag depending on
// opts.enforce_regime) and drops common attenuation constants:
//   p = sum_i |U_ai U_bi|^2 exp(-2 Gamma_i L / v_i)
//     + sum_{i<j} 2 Re[U_ai U_bi* conj(U_aj U_bj*)
//                      exp(-(Gamma_i/v_i + Gamma_j/v_j) L) exp(i k_ij L)].
// Overall detector-efficiency constants are set to 1; curves meant for
// comparison should be normalized.
OscillationResult detection_probability_closed(const WavePacketState& state,
                                               const MixingMatrix& u,
                                               const DetectionChannel& channel,
                                               const ExperimentGeometry& geometry,
                                               ClosedFormMode mode, const EngineOptions& opts = {});

OscillationResult detection_probability(const WavePacketState& state, const MixingMatrix& u,
                                        const DetectionChannel& channel,
                                        const ExperimentGeometry& geometry, ProbabilityPath path,
                                        const EngineOptions& opts = {});

// The regime warnings an evaluation at this geometry would carry, without
// computing the probability: packet-spreading, kernel-reduction quality and
// arrival-time-separation checks.
std::vector<std::string> regime_flags(const WavePacketState& state, const MixingMatrix& u,
                                      const DetectionChannel& channel,
                                      const ExperimentGeometry& geometry);

// A statistical mixture of Gaussian packets differing in launch point and
// mean momentum.  center_shift moves a component away from the detector, so
// its detection pattern is the pure-state pattern at L + center_shift; the
// mixture is the weight sum of those (probabilities are linear in the state).
struct MixedComponent {
  double center_shift = 0;  // 1/eV
  double momentum = 0;      // eV
  double weight = 0;
};

struct MixedInitialState {
  std::vector<MixedComponent> components;  // weights must sum to 1
  double sigma = 1.0;
};

struct MixedResult {
  OscillationResult result;  // terms left empty: components oscillate at
                             // different wavenumbers
  // Estimated pair-phase spread over the ensemble,
  //   max_{ij} |k_ij| (d + L dp / p),
  // with d the launch-point spread and dp the momentum spread.  Above 0.3 rad
  // the mixture visibly washes out the interference pattern.
  double phase_spread = 0;
  bool visibility_degraded = false;
};

MixedResult mixed_state_probability(const MassSpectrum& template_spectrum,
                                    const MixedInitialState& mix, const MixingMatrix& u,
                                    int production_flavor, const DetectionChannel& channel,
                                    const ExperimentGeometry& geometry, ProbabilityPath path,
                                    const EngineOptions& opts = {});

// Weighted sum over detection reactions; each channel keeps its own
// threshold, kernel and therefore its own set of pair wavenumbers.
struct WeightedChannel {
  DetectionChannel channel;
  double weight = 1.0;
};

OscillationResult multi_channel_probability(const WavePacketState& state, const MixingMatrix& u,
                                            const std::vector<WeightedChannel>& channels,
                                            const ExperimentGeometry& geometry,
                                            ProbabilityPath path, const EngineOptions& opts = {});

// Finite source-position / momentum-selection resolution applied to a
// sampled curve: Gaussian convolution along x with width delta_L on
// length/time axes and s_p on momentum/energy axes.  Uniform grids only;
// the kernel is truncated at six widths and renormalized per point, so a
// constant curve is preserved exactly.
Curve sampling_smear(const Curve& curve, double delta_L, double s_p);
Curve gaussian_smear(const Curve& curve, double width);

}  // namespace qtoa

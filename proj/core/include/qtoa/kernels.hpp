#pragma once

#include <complex>
#include <vector>

#include "qtoa/types.hpp"

namespace qtoa {

// Suppression kernels multiplying the two-time coherence of the detection
// amplitude.  Their widths set the timescale beyond which arrival-time
// superpositions stop interfering.
struct KernelSpec {
  double tau_dec = 1.0;                // detector-record decoherence time, 1/eV
  std::vector<double> product_masses;  // eV
  double delta = 1.0;                  // localization width of the products, 1/eV

  static KernelSpec from_channel(const DetectionChannel& ch) {
    return {ch.tau_dec, ch.product_masses, ch.delta};
  }

  double tau_sup() const;
  // The stationary-phase reduction behind the product kernel assumes
  // m * delta >> 1 for every produced particle; below ~10 it degrades.
  bool saddle_point_ok() const;
};

// Gaussian record-overlap kernel exp(-s^2 / (8 tau_dec^2)).
double decoherence_kernel(double s, double tau_dec);

// Produced-particle phase kernel Prod_n (m_n / (2 pi i (s - i m_n delta^2/2)))^{3/2}.
// The argument of the principal power is m / (pi m delta^2 + 2 pi i s), whose
// denominator keeps a positive real part for all real s, so the power never
// crosses the branch cut and the kernel is continuous with a real positive
// value at s = 0.
std::complex<double> product_phase_kernel(double s, const KernelSpec& spec);

// Combined kernel F(s) = decoherence * product-phase, F(-s) = conj(F(s)).
std::complex<double> coherence_kernel(double s, const KernelSpec& spec);

// True for all real s: |g2(s)| / |g2(0)| <= product_n (m_n delta^2 / 2|s|)^{3/2},
// which reduces to (tau_sup / 2|s|)^{3N/2} for equal product masses.
double product_kernel_tail_bound(double s, const KernelSpec& spec);

}  // namespace qtoa

#include "qtoa/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qtoa/errors.hpp"

namespace qtoa {

namespace {
constexpr double pi = std::numbers::pi;
}

double KernelSpec::tau_sup() const {
  double m_min = std::numeric_limits<double>::infinity();
  for (double m : product_masses) m_min = std::min(m_min, m);
  return m_min * delta * delta;
}

bool KernelSpec::saddle_point_ok() const {
  for (double m : product_masses)
    if (m * delta < 10.0) return false;
  return true;
}

double decoherence_kernel(double s, double tau_dec) {
  if (!(tau_dec > 0)) throw ValidationError("tau_dec", "must be > 0");
  const double r = s / tau_dec;
  return std::exp(-r * r / 8.0);
}

std::complex<double> product_phase_kernel(double s, const KernelSpec& spec) {
  if (spec.product_masses.empty())
    throw ValidationError("product_masses", "needs at least one produced particle");
  std::complex<double> out(1.0, 0.0);
  for (double m : spec.product_masses) {
    if (!(m > 0)) throw ValidationError("product_masses", "every mass must be > 0");
    const std::complex<double> denom(pi * m * spec.delta * spec.delta, 2.0 * pi * s);
    out *= std::pow(m / denom, 1.5);
  }
  return out;
}

std::complex<double> coherence_kernel(double s, const KernelSpec& spec) {
  return decoherence_kernel(s, spec.tau_dec) * product_phase_kernel(s, spec);
}

double product_kernel_tail_bound(double s, const KernelSpec& spec) {
  // Per particle |g2_n(s)| / |g2_n(0)| = (c / sqrt(s^2 + c^2))^{3/2} with
  // c = m delta^2 / 2, which is <= (c / |s|)^{3/2} for every real s.
  double bound = 1.0;
  for (double m : spec.product_masses)
    bound *= std::pow(m * spec.delta * spec.delta / (2.0 * std::fabs(s)), 1.5);
  return bound;
}

}  // namespace qtoa

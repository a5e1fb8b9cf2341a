#pragma once

// The two-flavor benchmark every heavier test runs on.  All quantities are
// natural units (eV, 1/eV).  Chosen so that the arrival-time splitting of the
// two mass eigenstates at the near end of the distance grid is about 1e-3 of
// the kernel coherence times: comfortably inside the regime where the closed
// forms hold, while keeping every scale order-unity for the quadrature.
//
// tests/data/benchmark.cfg describes the same setup in config-file form; the
// golden-file test asserts the parsed values match these exactly, so keep the
// two in sync (the masses below intentionally repeat the parser's
// sqrt((E - p) (E + p)) so the comparison is bitwise).

#include <cmath>
#include <numbers>

#include "qtoa/oscillation.hpp"
#include "qtoa/types.hpp"

namespace bench {

inline constexpr double momentum = 4.0;      // shared by both eigenstates, eV
inline constexpr double energy1 = 5.0;       // eV
inline constexpr double energy2 = 4.98;      // eV
inline constexpr double sigma = 1.6;         // packet width, 1/eV
inline constexpr double epsilon_th = 4.0;    // detection threshold, eV
inline constexpr double tau_dec = 3000.0;    // record decoherence time, 1/eV
inline constexpr double product_mass = 1e6;  // eV, both reaction products
inline constexpr double mixing_angle = std::numbers::pi / 4;
inline constexpr double L_min = 250.0;  // near end of the distance grid, 1/eV

inline double mass(double energy) {
  return std::sqrt((energy - momentum) * (energy + momentum));
}

inline qtoa::MassSpectrum spectrum() {
  return qtoa::MassSpectrum::equal_momentum({mass(energy1), mass(energy2)}, momentum);
}

inline qtoa::MixingMatrix mixing() { return qtoa::MixingMatrix::rotation2(mixing_angle); }

inline qtoa::WavePacketState state() { return {spectrum(), sigma, 0, 0.0}; }

// Product localization width such that the phase-suppression time of the
// product kernel equals tau: delta = sqrt(tau / m).
inline qtoa::DetectionChannel channel_with_tau(double tau) {
  qtoa::DetectionChannel ch;
  ch.epsilon_th = epsilon_th;
  ch.product_masses = {product_mass, product_mass};
  ch.delta = std::sqrt(tau / product_mass);
  ch.tau_dec = tau;
  ch.detection_flavor = 0;
  return ch;
}

inline qtoa::DetectionChannel channel() { return channel_with_tau(tau_dec); }

inline double wavenumber() {
  return qtoa::oscillation_wavenumber(spectrum(), 0, 1, epsilon_th);
}

inline double wavelength() { return 2 * std::numbers::pi / wavenumber(); }

}  // namespace bench

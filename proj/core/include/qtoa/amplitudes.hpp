#pragma once

#include <complex>

#include "qtoa/types.hpp"

namespace qtoa {

// Flavor-transition amplitude A_{alpha <- beta}(t, x) of a Gaussian packet
// produced in state.production_flavor, evaluated at the event (t, x).  Three
// evaluations of the same object at increasing levels of approximation:
//
//   momentum-integral: per mass eigenstate, (4 pi sigma^2)^{1/4} *
//     integral dp/(2 pi) exp(-sigma^2 (p - p_i)^2 / 2 + i p (x - c)
//     - i E_i(p) t - Gamma_i t) with the exact dispersion E_i(p); adaptive,
//     relative tolerance 1e-8.  The reference the others are tested against.
//
//   dispersive: the same integral with E_i(p) expanded to second order around
//     p_i plus the linearized width, giving per eigenstate
//     (sigma^2/pi)^{1/4} / sqrt(sigma^2 + i mu_i t) *
//     exp[(i (xr - v_i t) - dgamma_i t)^2 / (2 (sigma^2 + i mu_i t))] *
//     exp(i p_i xr - i E_i t - Gamma_i t),  mu_i = m_i^2 / E_i^3.
//
//   no-dispersion: mu_i -> 0, dgamma_i -> 0: rigidly translating envelopes
//     (pi sigma^2)^{-1/4} exp(-(xr - v_i t)^2 / (2 sigma^2)).
//
// xr = x - state.center throughout, so translating the packet translates
// every probability pattern exactly.
std::complex<double> amplitude_no_dispersion(const WavePacketState& state, const MixingMatrix& u,
                                             int detection_flavor, double t, double x);

std::complex<double> amplitude_dispersive(const WavePacketState& state, const MixingMatrix& u,
                                          int detection_flavor, double t, double x,
                                          const std::vector<double>& dgamma_dp = {});

std::complex<double> amplitude_momentum_integral(const WavePacketState& state,
                                                 const MixingMatrix& u, int detection_flavor,
                                                 double t, double x, double rel_tol = 1e-8);

// Size of the quadratic-dispersion correction accumulated over a flight of
// length L: mu_i L / (v_i sigma^2).  Packet spreading is negligible while
// this is << 1.
double dispersion_parameter(const MassSpectrum& spectrum, int i, double sigma, double L);

}  // namespace qtoa

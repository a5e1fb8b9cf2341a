#pragma once

#include <vector>

#include "qtoa/curve.hpp"

namespace qtoa {

// Dimensionless oscillation wavelength lambda * dm^2 / E as a function of
// x = E / eps_th for three wavenumber conventions:
//   standard:   4 pi                  (textbook k = dm^2 / 2E)
//   factor_two: 2 pi                  (k = dm^2 / E)
//   threshold:  2 pi / (1 - 1/(2x))   (k = (1 - eps/2E) dm^2 / E)
// The threshold curve equals the standard one at x = 1 and falls to the
// factor-two value as x grows.
struct WavelengthCurves {
  Curve standard;
  Curve factor_two;
  Curve threshold;
};

WavelengthCurves wavelength_curves(const std::vector<double>& e_over_eth);

// Toy event distribution in x = E / eps_th on [x_lo, x_hi]:
//   standard:  sin^2(alpha / x)
//   threshold: sin^2(alpha (1 - 1/(2x)) / x)
// normalized to unit integral.  alpha plays the role of dm^2 L / 4 E_th in
// dimensionless form.
struct ComparisonSpec {
  double alpha = 10.0;
  double x_lo = 1.0;
  double x_hi = 10.0;
  int grid_points = 2001;
};

enum class EventModel { standard, threshold };

void validate_comparison(const ComparisonSpec& spec);

// Throws GridTooCoarse unless the fastest oscillation of the chosen model
// keeps at least 10 grid points per period.
Curve event_distribution(EventModel model, const ComparisonSpec& spec);

// Statistical distinguishability per unit integrated luminosity between two
// normalized distributions on the same grid: 8 (1 - integral sqrt(p1 p2)).
// Ranges over [0, 8]; 0 for identical inputs, 8 for disjoint supports.
double statistical_distance(const Curve& p1, const Curve& p2);

// Least-squares fit of a + b exp(-c x) cos(k x + phi) to a sampled curve.
// The wavenumber is seeded from the dominant FFT bin and refined by
// coordinate descent; for fixed (k, c) the remaining parameters are linear.
// Requires >= 16 points and roughly >= 3 periods in the window.  Throws
// FitFailure when the rms residual exceeds 10% of the fitted amplitude.
struct WavenumberFit {
  double wavenumber = 0;  // k
  double amplitude = 0;   // b
  double offset = 0;      // a
  double decay = 0;       // c
  double phase = 0;       // phi
  double visibility = 0;  // b / a
  double residual = 0;    // rms residual / |b|
};

WavenumberFit extract_wavenumber(const Curve& curve);

// |X_j| for j = 0 .. n/2 of the real DFT of y; bin j corresponds to angular
// frequency 2 pi j / (n h) on a uniform grid of spacing h.
std::vector<double> power_spectrum(const std::vector<double>& y);

}  // namespace qtoa

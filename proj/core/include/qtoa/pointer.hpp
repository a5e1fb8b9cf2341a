#pragma once

#include <Eigen/Dense>

namespace qtoa {

// Normalized Gaussian resolution window of a pointer readout.
struct GaussianWindow {
  double width = 1.0;
  double operator()(double x) const;
};

// Readout density of an impulsive pointer measurement of observable A on the
// state rho0 evolved for time tbar under H:
//   p(X) = sum_k w(X - a_k) <a_k| e^{-iH tbar} rho0 e^{+iH tbar} |a_k>
// with {a_k, |a_k>} the eigensystem of A.  Linear in rho0 and normalized in
// X.  Validates hermiticity of H and A (NonHermitian), positivity and unit
// trace of rho0 (NonPositiveState), and caps the dimension at 64.
double von_neumann_pointer_pdf(const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& hamiltonian,
                               const Eigen::MatrixXcd& observable, const GaussianWindow& window,
                               double X, double tbar);

// Environmental-scattering timescales for a recorder of mass mu_star and
// localization width delta in a bath of temperature T_env that thermalizes
// over tau_rel (all natural units):
//   tau_loc = sqrt(tau_rel / T_env)          spatial localization
//   tau_dec = tau_rel / (mu_star T_env delta^2)   record decoherence
struct DecoherenceTimescales {
  double tau_loc = 0;
  double tau_dec = 0;
};

DecoherenceTimescales decoherence_timescales(double tau_rel, double T_env, double mu_star,
                                             double delta);

}  // namespace qtoa

#include "qtoa/pointer.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "qtoa/errors.hpp"

namespace qtoa {

namespace {
constexpr double pi = std::numbers::pi;

void require_hermitian(const Eigen::MatrixXcd& m, const char* field) {
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw NonHermitian(field);
}
}  // namespace

double GaussianWindow::operator()(double x) const {
  if (!(width > 0)) throw ValidationError("window.width", "must be > 0");
  const double u = x / width;
  return std::exp(-0.5 * u * u) / (width * std::sqrt(2 * pi));
}

double von_neumann_pointer_pdf(const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& hamiltonian,
                               const Eigen::MatrixXcd& observable, const GaussianWindow& window,
                               double X, double tbar) {
  const Eigen::Index n = rho0.rows();
  if (n < 1 || n > 64) throw ValidationError("density_matrix", "dimension must be in [1, 64]");
  if (rho0.cols() != n || hamiltonian.rows() != n || hamiltonian.cols() != n ||
      observable.rows() != n || observable.cols() != n)
    throw ValidationError("pointer_model", "matrix dimensions disagree");

  require_hermitian(hamiltonian, "hamiltonian");
  require_hermitian(observable, "observable");
  require_hermitian(rho0, "density_matrix");

  const double tr = rho0.trace().real();
  if (std::fabs(tr - 1.0) > 1e-8) throw NonPositiveState("trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rho_eig(rho0, Eigen::EigenvaluesOnly);
  if (rho_eig.eigenvalues().minCoeff() < -1e-10)
    throw NonPositiveState("negative eigenvalue " + std::to_string(rho_eig.eigenvalues().minCoeff()));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> h_eig(hamiltonian);
  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k)
    phases(k) = std::exp(std::complex<double>(0.0, -h_eig.eigenvalues()(k) * tbar));
  const Eigen::MatrixXcd evol =
      h_eig.eigenvectors() * phases.asDiagonal() * h_eig.eigenvectors().adjoint();
  const Eigen::MatrixXcd rho_t = evol * rho0 * evol.adjoint();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a_eig(observable);
  double p = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::VectorXcd vec = a_eig.eigenvectors().col(k);
    const double weight = (vec.adjoint() * rho_t * vec)(0, 0).real();
    p += window(X - a_eig.eigenvalues()(k)) * weight;
  }
  return p;
}

DecoherenceTimescales decoherence_timescales(double tau_rel, double T_env, double mu_star,
                                             double delta) {
  if (!(tau_rel > 0)) throw ValidationError("tau_rel", "must be > 0");
  if (!(T_env > 0)) throw ValidationError("T_env", "must be > 0");
  if (!(mu_star > 0)) throw ValidationError("mu_star", "must be > 0");
  if (!(delta > 0)) throw ValidationError("delta", "must be > 0");
  DecoherenceTimescales out;
  out.tau_loc = std::sqrt(tau_rel / T_env);
  out.tau_dec = tau_rel / (mu_star * T_env * delta * delta);
  return out;
}

}  // namespace qtoa

#include "qtoa/types.hpp"

#include <algorithm>
#include <cmath>

#include "qtoa/errors.hpp"

namespace qtoa {

MassSpectrum::MassSpectrum(std::vector<MassEigenstate> states) : states_(std::move(states)) {
  if (states_.empty()) throw ValidationError("spectrum", "needs at least one mass eigenstate");
  for (size_t i = 0; i < states_.size(); ++i) {
    const auto& s = states_[i];
    const std::string field = "spectrum[" + std::to_string(i) + "]";
    if (!(s.mass >= 0) || !std::isfinite(s.mass))
      throw ValidationError(field, "mass must be finite and >= 0");
    if (!std::isfinite(s.momentum)) throw ValidationError(field, "momentum must be finite");
    if (!(s.gamma >= 0) || !std::isfinite(s.gamma))
      throw ValidationError(field, "width must be finite and >= 0");
    if (s.mass == 0 && s.momentum == 0)
      throw ValidationError(field, "mass and momentum cannot both vanish");
  }
}

MassSpectrum MassSpectrum::equal_momentum(const std::vector<double>& masses, double p,
                                          const std::vector<double>& gammas) {
  if (!gammas.empty() && gammas.size() != masses.size())
    throw ValidationError("spectrum", "widths list must match masses list");
  std::vector<MassEigenstate> v;
  v.reserve(masses.size());
  for (size_t i = 0; i < masses.size(); ++i)
    v.push_back({masses[i], p, gammas.empty() ? 0.0 : gammas[i]});
  return MassSpectrum(std::move(v));
}

MassSpectrum MassSpectrum::equal_energy(const std::vector<double>& masses, double E,
                                        const std::vector<double>& gammas) {
  if (!gammas.empty() && gammas.size() != masses.size())
    throw ValidationError("spectrum", "widths list must match masses list");
  std::vector<MassEigenstate> v;
  v.reserve(masses.size());
  for (size_t i = 0; i < masses.size(); ++i) {
    if (!(E > masses[i]))
      throw ValidationError("spectrum", "shared energy must exceed every mass");
    v.push_back({masses[i], std::sqrt((E - masses[i]) * (E + masses[i])),
                 gammas.empty() ? 0.0 : gammas[i]});
  }
  return MassSpectrum(std::move(v));
}

MassSpectrum MassSpectrum::equal_velocity(const std::vector<double>& masses, double vel,
                                          const std::vector<double>& gammas) {
  if (!(vel > 0) || !(vel < 1))
    throw ValidationError("spectrum", "shared velocity must lie in (0, 1)");
  if (!gammas.empty() && gammas.size() != masses.size())
    throw ValidationError("spectrum", "widths list must match masses list");
  const double gamma_lorentz = 1.0 / std::sqrt((1 - vel) * (1 + vel));
  std::vector<MassEigenstate> v;
  v.reserve(masses.size());
  for (size_t i = 0; i < masses.size(); ++i)
    v.push_back({masses[i], masses[i] * vel * gamma_lorentz, gammas.empty() ? 0.0 : gammas[i]});
  return MassSpectrum(std::move(v));
}

double MassSpectrum::energy(int i) const {
  const auto& s = states_[static_cast<size_t>(i)];
  return std::hypot(s.mass, s.momentum);
}

double MassSpectrum::velocity(int i) const {
  return states_[static_cast<size_t>(i)].momentum / energy(i);
}

double MassSpectrum::dispersion_rate(int i) const {
  const double m = states_[static_cast<size_t>(i)].mass;
  const double E = energy(i);
  return m * m / (E * E * E);
}

MixingMatrix::MixingMatrix(Eigen::MatrixXcd u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() < 1)
    throw ValidationError("mixing_matrix", "must be square and non-empty");
}

MixingMatrix MixingMatrix::identity(int n) {
  return MixingMatrix(Eigen::MatrixXcd::Identity(n, n));
}

MixingMatrix MixingMatrix::rotation2(double angle) {
  Eigen::MatrixXcd u(2, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  u << c, s, -s, c;
  return MixingMatrix(u);
}

double MixingMatrix::unitarity_deviation() const {
  const Eigen::MatrixXcd d =
      u_ * u_.adjoint() - Eigen::MatrixXcd::Identity(u_.rows(), u_.cols());
  return d.cwiseAbs().maxCoeff();
}

void validate_mixing_matrix(const MixingMatrix& u) {
  const double dev = u.unitarity_deviation();
  if (!(dev <= 1e-10)) throw NonUnitary(dev);
}

void validate_state(const WavePacketState& state, int mixing_dim) {
  if (!(state.sigma > 0) || !std::isfinite(state.sigma))
    throw ValidationError("state.sigma", "packet width must be finite and > 0");
  if (state.production_flavor < 0 || state.production_flavor >= mixing_dim)
    throw ValidationError("state.production_flavor", "outside mixing-matrix dimension");
  if (state.spectrum.size() != mixing_dim)
    throw ValidationError("state.spectrum", "size must match mixing-matrix dimension");
  if (!std::isfinite(state.center))
    throw ValidationError("state.center", "must be finite");
}

double DetectionChannel::tau_sup() const {
  double m_min = std::numeric_limits<double>::infinity();
  for (double m : product_masses) m_min = std::min(m_min, m);
  return m_min * delta * delta;
}

void validate_channel(const DetectionChannel& ch, int mixing_dim) {
  if (!(ch.epsilon_th >= 0) || !std::isfinite(ch.epsilon_th))
    throw ValidationError("channel.epsilon_th", "threshold must be finite and >= 0");
  if (ch.product_masses.empty())
    throw ValidationError("channel.product_masses", "needs at least one produced particle");
  for (double m : ch.product_masses)
    if (!(m > 0) || !std::isfinite(m))
      throw ValidationError("channel.product_masses", "every mass must be finite and > 0");
  if (!(ch.delta > 0) || !std::isfinite(ch.delta))
    throw ValidationError("channel.delta", "localization width must be finite and > 0");
  if (!(ch.tau_dec > 0) || !std::isfinite(ch.tau_dec))
    throw ValidationError("channel.tau_dec", "decoherence time must be finite and > 0");
  if (ch.detection_flavor < 0 || ch.detection_flavor >= mixing_dim)
    throw ValidationError("channel.detection_flavor", "outside mixing-matrix dimension");
}

}  // namespace qtoa

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

namespace qtoa {

// One propagating mass eigenstate.  All members in natural units (eV).
struct MassEigenstate {
  double mass = 0;      // m_i >= 0
  double momentum = 0;  // packet centre p_i
  double gamma = 0;     // decay width at p_i (>= 0)
};

// An ordered set of mass eigenstates sharing one production vertex.
class MassSpectrum {
 public:
  explicit MassSpectrum(std::vector<MassEigenstate> states);

  // All states share the packet momentum p.
  static MassSpectrum equal_momentum(const std::vector<double>& masses, double p,
                                     const std::vector<double>& gammas = {});
  // All states share the total energy E (p_i = sqrt(E^2 - m_i^2)).
  static MassSpectrum equal_energy(const std::vector<double>& masses, double E,
                                   const std::vector<double>& gammas = {});
  // All states share the group velocity v (p_i = m_i v / sqrt(1 - v^2)).
  static MassSpectrum equal_velocity(const std::vector<double>& masses, double v,
                                     const std::vector<double>& gammas = {});

  int size() const { return static_cast<int>(states_.size()); }
  const MassEigenstate& operator[](int i) const { return states_[static_cast<size_t>(i)]; }
  const std::vector<MassEigenstate>& states() const { return states_; }

  double energy(int i) const;    // sqrt(m^2 + p^2)
  double velocity(int i) const;  // p / E
  // Quadratic dispersion coefficient m^2 / E^3 (packet spreading rate).
  double dispersion_rate(int i) const;

 private:
  std::vector<MassEigenstate> states_;
};

// Flavor-mass mixing matrix; rows are flavors, columns mass eigenstates.
class MixingMatrix {
 public:
  explicit MixingMatrix(Eigen::MatrixXcd u);

  static MixingMatrix identity(int n);
  // 2-flavor rotation [[cos, sin], [-sin, cos]].
  static MixingMatrix rotation2(double angle);

  int dim() const { return static_cast<int>(u_.rows()); }
  std::complex<double> operator()(int flavor, int mass_index) const {
    return u_(flavor, mass_index);
  }
  const Eigen::MatrixXcd& matrix() const { return u_; }
  double unitarity_deviation() const;  // max |U U^dag - 1| entry

 private:
  Eigen::MatrixXcd u_;
};

// Throws NonUnitary if the deviation exceeds 1e-10.
void validate_mixing_matrix(const MixingMatrix& u);

// A Gaussian wave packet produced in a definite flavor.  `center` is the
// packet's mean position at t = 0 (the detector sits at +L), so translating
// center -> center + c shifts every detection curve by exactly c.
struct WavePacketState {
  MassSpectrum spectrum;
  double sigma = 1.0;  // spatial width, 1/eV
  int production_flavor = 0;
  double center = 0.0;  // 1/eV
};

void validate_state(const WavePacketState& state, int mixing_dim);

// Detection reaction: threshold energy, produced masses, localization scale
// of the detector record and its coherence time.
struct DetectionChannel {
  double epsilon_th = 0;               // eV
  std::vector<double> product_masses;  // eV, all > 0
  double delta = 1.0;                  // detector localization width, 1/eV
  double tau_dec = 1.0;                // record decoherence time, 1/eV
  int detection_flavor = 0;

  // Phase-suppression timescale of the produced-particle kernel.
  double tau_sup() const;
};

void validate_channel(const DetectionChannel& ch, int mixing_dim);

struct ExperimentGeometry {
  double distance = 0;  // source-detector separation L, 1/eV
  double horizon = std::numeric_limits<double>::infinity();  // observation window T
};

}  // namespace qtoa

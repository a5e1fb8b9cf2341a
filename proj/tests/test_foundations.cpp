#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "qtoa/errors.hpp"
#include "qtoa/kernels.hpp"
#include "qtoa/quadrature.hpp"
#include "qtoa/types.hpp"
#include "qtoa/units.hpp"

using namespace qtoa;
using doctest::Approx;

constexpr double pi = std::numbers::pi;

TEST_CASE("quantity parsing accepts every documented form") {
  CHECK(parse_quantity("1.0MeV", Dimension::energy) == Approx(1e6).epsilon(1e-15));
  CHECK(parse_quantity("2.5 GeV", Dimension::energy) == Approx(2.5e9).epsilon(1e-15));
  CHECK(parse_quantity("1 K", Dimension::energy) ==
        Approx(constants::boltzmann_eV_per_K).epsilon(1e-15));
  CHECK(parse_quantity("1 m", Dimension::length) == Approx(meters_to_natural(1.0)).epsilon(1e-15));
  CHECK(parse_quantity("3 km", Dimension::length) ==
        Approx(meters_to_natural(3000.0)).epsilon(1e-15));
  CHECK(parse_quantity("2 ns", Dimension::time) ==
        Approx(seconds_to_natural(2e-9)).epsilon(1e-15));
  // inverse energy is natural for both lengths and times
  CHECK(parse_quantity("7 eV^-1", Dimension::length) == 7.0);
  CHECK(parse_quantity("7 1/eV", Dimension::time) == 7.0);
  CHECK(parse_quantity("-3.5", Dimension::dimensionless) == -3.5);
}

TEST_CASE("quantity parsing rejects wrong or missing units") {
  CHECK_THROWS_AS(parse_quantity("", Dimension::energy), ValidationError);
  CHECK_THROWS_AS(parse_quantity("abc", Dimension::energy), ValidationError);
  CHECK_THROWS_AS(parse_quantity("5 parsec", Dimension::length), ValidationError);
  CHECK_THROWS_AS(parse_quantity("5 m", Dimension::energy), ValidationError);
  CHECK_THROWS_AS(parse_quantity("5", Dimension::energy), ValidationError);
  CHECK_THROWS_AS(parse_quantity("5 eV", Dimension::dimensionless), ValidationError);
  CHECK_THROWS_AS(parse_quantity("5 eV^-1", Dimension::energy), ValidationError);
}

TEST_CASE("unit conversions round-trip") {
  CHECK(natural_to_meters(meters_to_natural(123.456)) == Approx(123.456).epsilon(1e-15));
  CHECK(natural_to_seconds(seconds_to_natural(9.9e-7)) == Approx(9.9e-7).epsilon(1e-15));
  CHECK(eV_to_kelvin(kelvin_to_eV(300.0)) == Approx(300.0).epsilon(1e-15));
  CHECK(to_si(1.0, Dimension::energy) == 1.0);
  CHECK(to_si(1.0, Dimension::length) == natural_to_meters(1.0));
  CHECK(to_si(1.0, Dimension::time) == natural_to_seconds(1.0));
}

TEST_CASE("spectrum factories satisfy the dispersion relation") {
  const auto eq_p = MassSpectrum::equal_momentum({1.0, 2.0}, 10.0);
  for (int i = 0; i < 2; ++i) {
    CHECK(eq_p[i].momentum == 10.0);
    CHECK(eq_p.energy(i) ==
          Approx(std::sqrt(eq_p[i].mass * eq_p[i].mass + 100.0)).epsilon(1e-15));
    CHECK(eq_p.velocity(i) == Approx(10.0 / eq_p.energy(i)).epsilon(1e-15));
  }

  const auto eq_e = MassSpectrum::equal_energy({1.0, 2.0}, 10.0);
  CHECK(eq_e.energy(0) == Approx(10.0).epsilon(1e-15));
  CHECK(eq_e.energy(1) == Approx(10.0).epsilon(1e-15));

  const auto eq_v = MassSpectrum::equal_velocity({1.0, 2.0}, 0.8);
  CHECK(eq_v.velocity(0) == Approx(0.8).epsilon(1e-14));
  CHECK(eq_v.velocity(1) == Approx(0.8).epsilon(1e-14));

  // dispersion rate m^2 / E^3
  const double E = eq_p.energy(1);
  CHECK(eq_p.dispersion_rate(1) == Approx(4.0 / (E * E * E)).epsilon(1e-14));
}

TEST_CASE("spectrum factories reject unphysical input") {
  CHECK_THROWS_AS(MassSpectrum({}), ValidationError);
  CHECK_THROWS_AS(MassSpectrum({{-1.0, 1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(MassSpectrum::equal_energy({3.0}, 2.0), ValidationError);
  CHECK_THROWS_AS(MassSpectrum::equal_velocity({1.0}, 1.5), ValidationError);
  CHECK_THROWS_AS(MassSpectrum::equal_momentum({1.0, 2.0}, 5.0, {0.1}), ValidationError);
}

TEST_CASE("mixing matrices are unitary and validated") {
  const auto r = MixingMatrix::rotation2(0.3);
  CHECK(r.unitarity_deviation() < 1e-15);
  CHECK(std::abs(r(0, 0) - std::cos(0.3)) < 1e-15);
  CHECK(std::abs(r(0, 1) - std::sin(0.3)) < 1e-15);
  CHECK(std::abs(r(1, 0) + std::sin(0.3)) < 1e-15);
  validate_mixing_matrix(r);
  validate_mixing_matrix(MixingMatrix::identity(3));

  Eigen::MatrixXcd bad = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(validate_mixing_matrix(MixingMatrix(bad)), NonUnitary);
}

TEST_CASE("adaptive quadrature reproduces analytic integrals") {
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi, opts) ==
        Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return 4.0 / (1.0 + x * x); }, 0.0, 1.0, opts) ==
        Approx(pi).epsilon(1e-12));
  // |x - 1/3| has a kink; a breakpoint pins it to a panel edge
  opts.breakpoints = {1.0 / 3.0};
  CHECK(integrate([](double x) { return std::fabs(x - 1.0 / 3.0); }, 0.0, 1.0, opts) ==
        Approx(5.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature handles complex integrands") {
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  const std::complex<double> v =
      integrate([](double x) { return std::polar(1.0, x); }, 0.0, 1.0, opts);
  CHECK(v.real() == Approx(std::sin(1.0)).epsilon(1e-12));
  CHECK(v.imag() == Approx(1.0 - std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand converges under a panel-width bound") {
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.max_panel_width = 2 * pi / 50.0 / 4.0;  // quarter period panels
  const double v = integrate([](double x) { return std::sin(50.0 * x) * std::sin(50.0 * x); },
                             0.0, 2 * pi, opts);
  CHECK(v == Approx(pi).epsilon(1e-10));
}

TEST_CASE("quadrature failure modes raise typed errors") {
  QuadratureOptions opts;
  opts.max_panels = 8;
  opts.max_panel_width = 1e-6;  // needs ~1e6 panels just to cover [0, 1]
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, opts), NonConvergent);

  QuadratureOptions tight;
  tight.rel_tol = 1e-14;
  tight.max_panels = 40;
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1e6 * x); }, 0.0, 1.0, tight),
                  QuadratureFailure);
}

TEST_CASE("simpson sums uniform samples and rejects ragged grids") {
  const int n = 101;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = pi * i / (n - 1);
    y[i] = std::sin(x[i]);
  }
  CHECK(simpson(x, y) == Approx(2.0).epsilon(1e-8));

  std::vector<double> bad_x = {0.0, 0.1, 0.3};
  std::vector<double> bad_y = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(simpson(bad_x, bad_y), GridMismatch);
}

TEST_CASE("decoherence kernel is a unit-height gaussian in the time split") {
  CHECK(decoherence_kernel(0.0, 3.0) == 1.0);
  CHECK(decoherence_kernel(2.0, 3.0) == Approx(std::exp(-4.0 / 72.0)).epsilon(1e-15));
  CHECK(decoherence_kernel(-2.0, 3.0) == decoherence_kernel(2.0, 3.0));
  CHECK_THROWS_AS(decoherence_kernel(1.0, 0.0), ValidationError);
}

TEST_CASE("product kernel: conjugate symmetry, continuity, positive peak") {
  KernelSpec spec{3000.0, {1e6, 1e6}, std::sqrt(3000.0 / 1e6)};
  CHECK(spec.tau_sup() == Approx(3000.0).epsilon(1e-12));
  CHECK(spec.saddle_point_ok());

  const auto at0 = product_phase_kernel(0.0, spec);
  CHECK(at0.imag() == Approx(0.0));
  CHECK(at0.real() > 0.0);
  // each factor at s = 0 is (1 / (pi delta^2))^{3/2}
  const double expect0 = std::pow(1.0 / (pi * spec.delta * spec.delta), 3.0);
  CHECK(at0.real() == Approx(expect0).epsilon(1e-12));

  for (double s : {0.5, 12.0, 4000.0, 1e6}) {
    const auto plus = product_phase_kernel(s, spec);
    const auto minus = product_phase_kernel(-s, spec);
    CHECK(std::abs(plus - std::conj(minus)) <= 1e-15 * std::abs(plus));
  }
  // no branch-cut jump across s = 0
  const auto left = product_phase_kernel(-1e-9, spec);
  const auto right = product_phase_kernel(1e-9, spec);
  CHECK(std::abs(left - right) < 1e-9 * std::abs(at0));

  KernelSpec soft{1.0, {1.0}, 1.0};
  CHECK_FALSE(soft.saddle_point_ok());
}

TEST_CASE("tail bound dominates the product kernel") {
  KernelSpec spec{3000.0, {1e6, 1e6}, std::sqrt(3000.0 / 1e6)};
  const double peak = std::abs(product_phase_kernel(0.0, spec));
  for (double s : {100.0, 1500.0, 3000.0, 3e4, 1e6}) {
    const double ratio = std::abs(product_phase_kernel(s, spec)) / peak;
    CHECK(ratio <= product_kernel_tail_bound(s, spec) * (1.0 + 1e-12));
  }
}

TEST_CASE("combined kernel factorizes") {
  KernelSpec spec{50.0, {1e5}, 0.03};
  for (double s : {0.0, 7.0, -19.0}) {
    const auto expect = decoherence_kernel(s, spec.tau_dec) * product_phase_kernel(s, spec);
    CHECK(std::abs(coherence_kernel(s, spec) - expect) <= 1e-15 * std::abs(expect));
  }
}

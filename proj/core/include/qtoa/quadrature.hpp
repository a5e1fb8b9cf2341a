#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qtoa {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;   // accept when total error <= max(abs_tol, rel_tol*|result|)
  int max_panels = 20000;
  // Panels are never created wider than this.  Used as a step bound when the
  // integrand oscillates: a panel per fraction of a period keeps the
  // Gauss-Kronrod error estimate honest.  0 disables the bound.
  double max_panel_width = 0.0;
  // Interior points that must coincide with panel edges (envelope centres,
  // kernel kinks, packet positions, ...).  Points outside [a, b] are ignored.
  std::vector<double> breakpoints;
};

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opts);
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, const QuadratureOptions& opts);

// Globally adaptive Gauss(7)/Kronrod(15) integration on [a, b]: the panel
// with the largest error estimate is bisected until the summed error passes
// the tolerance.  Deterministic for a given integrand and options.  Throws
// QuadratureFailure when max_panels is exhausted, NonConvergent when the
// width bound alone requires more than max_panels panels.  Real integrands
// get a real result, complex integrands a complex one.
template <typename F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  if constexpr (std::is_convertible_v<std::invoke_result_t<F&, double>, double>)
    return integrate_real(std::forward<F>(f), a, b, opts);
  else
    return integrate_complex(std::forward<F>(f), a, b, opts);
}

// Composite Simpson rule on an already-sampled uniform grid (odd or even
// point count; an even count closes with one trapezoid step).  Throws
// GridMismatch when the grid is not uniform or has fewer than two points.
double simpson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qtoa

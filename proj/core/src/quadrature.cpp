#include "qtoa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>

#include "qtoa/errors.hpp"

namespace qtoa {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (nodes on [-1, 1]).
constexpr int kronrod_n = 15;
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class T>
double vnorm(const T& v) {
  if constexpr (std::is_same_v<T, double>) return std::fabs(v);
  else return std::abs(v);
}

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  double l1;  // h * sum wgk |f|: the roundoff scale of this panel's sum
};

// One Gauss-Kronrod evaluation on [a, b]; error from the Gauss/Kronrod gap.
template <class T, class F>
Panel<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fv[kronrod_n];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * xgk[i]);
    fv[14 - i] = f(c + h * xgk[i]);
  }
  fv[7] = f(c);
  T kron = wgk[7] * fv[7];
  T gauss = wg[3] * fv[7];
  double l1 = wgk[7] * vnorm(fv[7]);
  for (int i = 0; i < 7; ++i) {
    kron += wgk[i] * (fv[i] + fv[14 - i]);
    l1 += wgk[i] * (vnorm(fv[i]) + vnorm(fv[14 - i]));
  }
  for (int i = 1; i < 7; i += 2) gauss += wg[i / 2] * (fv[i] + fv[14 - i]);
  kron *= h;
  gauss *= h;
  l1 *= h;
  // The plain Gauss/Kronrod gap: scale-invariant, no artificial sharpening.
  return {a, b, kron, vnorm(T(kron - gauss)), l1};
}

template <class T, class F>
T adaptive(const F& f, double a, double b, const QuadratureOptions& opts) {
  if (!(b > a)) {
    if (a == b) return T(0);
    throw QuadratureFailure("integration bounds out of order");
  }

  std::vector<double> edges = {a, b};
  for (double p : opts.breakpoints)
    if (p > a && p < b) edges.push_back(p);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto worse = [](const Panel<T>& x, const Panel<T>& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.a < y.a;  // deterministic tie-break
  };
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(worse)> heap(worse);

  T total(0);
  double total_err = 0;
  double total_l1 = 0;
  long panels = 0;
  auto push_panel = [&](double lo, double hi) {
    Panel<T> p = gk15<T>(f, lo, hi);
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
    heap.push(std::move(p));
    ++panels;
  };

  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    long nsub = 1;
    if (opts.max_panel_width > 0) {
      nsub = static_cast<long>(std::ceil((hi - lo) / opts.max_panel_width));
      nsub = std::max(nsub, 1L);
      if (panels + nsub > opts.max_panels)
        throw NonConvergent("step bound needs more than " + std::to_string(opts.max_panels) +
                            " panels on [" + std::to_string(a) + ", " + std::to_string(b) +
                            "]: oscillation period unresolved");
    }
    for (long k = 0; k < nsub; ++k)
      push_panel(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(nsub),
                 lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(nsub));
  }

  // Accept on the requested tolerance or on the roundoff level of the sum:
  // once the summed error sits at machine precision of sum |f|, further
  // splitting manufactures panels, not accuracy (an all-but-cancelling
  // integrand can never meet a purely relative tolerance).
  auto converged = [&] {
    const double target =
        std::max({opts.abs_tol, opts.rel_tol * vnorm(total), 100 * 1e-16 * total_l1});
    return total_err <= target;
  };

  // Bisecting a panel whose children reproduce its value without shrinking
  // its error estimate means the estimate is measuring evaluation noise, not
  // truncation.  After a run of such splits the best estimate is returned
  // as-is: an integral that cancels to the noise floor (arrival amplitudes
  // far outside the envelope, kernel tails) has no better answer in doubles.
  int roundoff_events = 0;

  while (!converged() && roundoff_events < 20) {
    if (panels >= opts.max_panels) {
      char msg[256];
      std::snprintf(msg, sizeof msg,
                    "adaptive quadrature on [%g, %g] did not reach tolerance within %d panels "
                    "(error %g, value %g, l1 %g)",
                    a, b, opts.max_panels, total_err, vnorm(total), total_l1);
      throw QuadratureFailure(msg);
    }
    Panel<T> worst = heap.top();
    heap.pop();
    if (worst.error == 0) {  // every panel is spent; kill accumulation residue
      heap.push(std::move(worst));
      total_err = 0;
      continue;
    }
    const bool unsplittable = worst.b - worst.a <= std::fabs(worst.a) * 1e-15 + 1e-300;
    const bool saturated = worst.error <= 100 * 1e-16 * worst.l1;
    if (unsplittable || saturated) {
      // Width or error is at double precision; splitting cannot improve it.
      // Re-push with zero error so it never surfaces again.
      total_err -= worst.error;
      worst.error = 0;
      heap.push(std::move(worst));
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel<T> left = gk15<T>(f, worst.a, mid);
    Panel<T> right = gk15<T>(f, mid, worst.b);
    if (vnorm(T(left.value + right.value - worst.value)) <=
            1e-5 * vnorm(worst.value) + 1e-300 &&
        left.error + right.error >= 0.99 * worst.error)
      ++roundoff_events;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++panels;
  }
  return total;
}

}  // namespace

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opts) {
  return adaptive<double>(f, a, b, opts);
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, const QuadratureOptions& opts) {
  return adaptive<std::complex<double>>(f, a, b, opts);
}

double simpson(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size()) throw GridMismatch("simpson: x and y sizes differ");
  if (n < 2) throw GridMismatch("simpson: need at least two points");
  const double h = x[1] - x[0];
  if (!(h > 0)) throw GridMismatch("simpson: grid must be increasing");
  const double span = x[n - 1] - x[0];
  for (size_t i = 1; i < n; ++i)
    if (std::fabs((x[i] - x[i - 1]) - h) > 1e-9 * span)
      throw GridMismatch("simpson: grid is not uniform");

  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  size_t m = n;
  double tail = 0;
  if (n % 2 == 0) {  // close the last interval with a trapezoid
    tail = 0.5 * h * (y[n - 2] + y[n - 1]);
    m = n - 1;
  }
  double s = y[0] + y[m - 1];
  for (size_t i = 1; i < m - 1; i += 2) s += 4.0 * y[i];
  for (size_t i = 2; i < m - 1; i += 2) s += 2.0 * y[i];
  return tail + s * h / 3.0;
}

}  // namespace qtoa

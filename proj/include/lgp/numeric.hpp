#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace lgp::numeric {

/// Bisection for a sign change of `g` on [lo, hi]. `g(lo)` and `g(hi)` must
/// have opposite signs (or one of them vanish). Runs until the bracket stops
/// shrinking or its width drops below `xtol`.
template <class F>
double bisect(F&& g, double lo, double hi, double xtol = 0.0) {
  double glo = g(lo);
  if (glo == 0.0) return lo;
  const double ghi = g(hi);
  if (ghi == 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= xtol) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section minimisation of a unimodal function on [lo, hi].
template <class F>
std::pair<double, double> golden_min(F&& g, double lo, double hi, double xtol = 1e-13) {
  constexpr double r = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
  const double x = gc <= gd ? c : d;
  return {x, std::min(gc, gd)};
}

/// Nodes and weights of the two-point Gauss-Legendre rule on [a, b].
inline std::pair<std::pair<double, double>, double> gauss2(double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double off = half / std::sqrt(3.0);
  return {{mid - off, mid + off}, half};
}

}  // namespace lgp::numeric

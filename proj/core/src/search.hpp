#pragma once

#include <cmath>
#include <utility>

// Scalar 1D search helpers shared by the analysis modules.
namespace phasespace::detail {

// Root of f in [a, b] given f(a), f(b) of opposite sign (or zero).
template <class F>
double bisect_root(F&& f, double a, double b, double fa, double tolerance) {
  if (fa == 0.0) return a;
  for (int it = 0; it < 200 && std::abs(b - a) > tolerance; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Minimizer of a unimodal f on [a, b]; returns (argmin, f(argmin)).
template <class F>
std::pair<double, double> golden_section_min(F&& f, double a, double b, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && std::abs(b - a) > tolerance; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace phasespace::detail

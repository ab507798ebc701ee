#pragma once

#include <complex>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/units.hpp"

namespace phasespace {

using complex = std::complex<double>;

/// Minimum-uncertainty Gaussian
///   (2 pi sigma^2)^(-1/4) exp(-(x - x0)^2 / 4 sigma^2 + i p0 x / hbar + i phase)
/// scaled by a complex coefficient.
struct GaussianComponent {
  double sigma = 1.0;
  double x0 = 0.0;
  double p0 = 0.0;
  double phase = 0.0;
  complex coefficient{1.0, 0.0};

  complex operator()(double x, double hbar) const;
};

enum class CatKind { position_cat, momentum_cat, compass, generic };

/// Pure superposition of Gaussian components with its normalization constant.
/// For the position and momentum cats the shape parameters (sigma, x0, p0) are kept so the
/// closed-form evaluators can be selected.
struct CatSpec {
  std::vector<GaussianComponent> components;
  double norm = 1.0;
  CatKind kind = CatKind::generic;
  double sigma = 0.0;
  double x0 = 0.0;
  double p0 = 0.0;
  UnitSystem units;
};

struct MixedBranch {
  double probability = 0.0;
  CatSpec state;
};

/// Incoherent mixture sum_i P_i |psi_i><psi_i|.
struct MixedSpec {
  std::vector<MixedBranch> branches;
};

// N1 = 1/sqrt(2(exp(-x0^2/2 sigma^2) + 1))
double position_cat_norm(double sigma, double x0);
// N2 = 1/sqrt(2(exp(-2 p0^2 sigma^2/hbar^2) + 1))
double momentum_cat_norm(double sigma, double p0, const UnitSystem& units = {});

CatSpec make_cat_position(double sigma, double x0, const UnitSystem& units = {});
CatSpec make_cat_momentum(double sigma, double p0, const UnitSystem& units = {});
CatSpec make_compass(double sigma, double x0, double p0, const UnitSystem& units = {});
// Arbitrary superposition normalized by quadrature.
CatSpec make_superposition(std::vector<GaussianComponent> components, const UnitSystem& units = {});
MixedSpec make_mixed(CatSpec cat1, CatSpec cat2, double p);

complex psi_eval(const CatSpec& state, double x);

// int |sum c_k phi_k|^2 dx on a uniform trapezoid lattice (spectrally accurate here).
double norm_squared_by_quadrature(const std::vector<GaussianComponent>& components, double hbar);

// Support interval outside which every component is below exp(-36) of its peak.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval position_support(const CatSpec& state);

// Upper bound on the probability mass of |psi|^2 outside [x_min, x_max] plus
// the momentum-space mass outside [p_min, p_max] (Cauchy-Schwarz over components).
double tail_mass_bound(const CatSpec& state, const Bounds& window);

// Default window x in +-(max|x0| + 8 sigma), p in +-(max|p0| + 8 hbar/(2 sigma)).
Bounds default_window(const CatSpec& state);
Bounds default_window(const MixedSpec& state);

// Purity Tr(rho^2) of a mixture from Gaussian overlaps evaluated by quadrature.
double purity_by_quadrature(const MixedSpec& state);

// <a|b> = int conj(psi_a) psi_b dx by quadrature.
complex inner_product(const CatSpec& a, const CatSpec& b);

}  // namespace phasespace

#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "phasespace/grid.hpp"
#include "phasespace/state_spec.hpp"
#include "phasespace/units.hpp"

namespace phasespace {

// Normalized convention throughout:
//   W(x, p) = (2 pi hbar)^-1 int psi(x + y/2) conj(psi(x - y/2)) exp(-i p y / hbar) dy,
// so that the double integral of W is Tr(rho) = 1.

double wc1_closed(double sigma, double x0, double x, double p, const UnitSystem& units = {});
double wc2_closed(double sigma, double p0, double x, double p, const UnitSystem& units = {});
double wrho_closed(double sigma, double x0, double p0, double x, double p, const UnitSystem& units = {});
// W_rho rigidly displaced: evaluated at (x + delta2, p + delta1).
double wrho_perturbed(double sigma, double x0, double p0, double delta1, double delta2, double x,
                      double p, const UnitSystem& units = {});

enum class ClosedFormKind { cat_position, cat_momentum, mixed, perturbed_mixed };

struct ClosedFormWigner {
  ClosedFormKind kind = ClosedFormKind::mixed;
  double sigma = 1.0;
  double x0 = 0.0;
  double p0 = 0.0;
  double probability = 0.5;  // weight of the position cat in a mixture
  double delta1 = 0.0;
  double delta2 = 0.0;
  UnitSystem units;

  double operator()(double x, double p) const;
};

// Closed form for position/momentum cats and their two-branch mixtures; nullopt otherwise.
std::optional<ClosedFormWigner> closed_form_for(const StateSpec& state);

WignerField closed_form_field(const ClosedFormWigner& w, const PhaseSpaceGrid& grid);

enum class Coverage { require, skip };

// Defining-integral transform (the numeric oracle). Mixtures are summed branch by branch.
WignerField wigner_transform(const StateSpec& state, const PhaseSpaceGrid& grid,
                             Coverage coverage = Coverage::require);

// Single-point oracle evaluation (direct wavefunction sampling, no lattice tie-in).
double wigner_at(const StateSpec& state, double x, double p);

// Analytic expansion norm^2 sum_jk c_j conj(c_k) W_jk over Gaussian pairs; every
// component must share one sigma. Used for compass and generic superpositions.
bool has_pair_expansion(const CatSpec& state);
double superposition_wigner(const CatSpec& state, double x, double p);

// Closed form when available, Gaussian pair expansion next, oracle otherwise.
WignerField wigner_field(const StateSpec& state, const PhaseSpaceGrid& grid,
                         Coverage coverage = Coverage::require);
PointFunction wigner_point_function(const StateSpec& state);

// Characteristic function tilde W(Q, P) = int W(q, p) exp(-i (q P + p Q) / hbar) dq dp.
// Q is conjugate to p, P to q; value 1 at the origin.
double characteristic_of_cat(double sigma, double x0, double Q, double P, const UnitSystem& units = {});
double characteristic_of_momentum_cat(double sigma, double p0, double Q, double P,
                                      const UnitSystem& units = {});

}  // namespace phasespace

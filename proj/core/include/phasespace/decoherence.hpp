#pragma once

#include <complex>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/states.hpp"
#include "phasespace/units.hpp"

namespace phasespace {

/// Ohmic high-temperature bath acting on a free particle of mass m.
struct BathParams {
  double m = 1.0;
  double gamma = 1.0;
  double T = 1.0;

  void validate() const;
};

struct GreenFunction {
  double G = 0.0;
  double Gdot = 0.0;
  double Gddot = 0.0;
};

struct BathMoments {
  double X2 = 0.0;     // <X^2>
  double XXdot = 0.0;  // <X Xdot + Xdot X>
  double Xdot2 = 0.0;  // <Xdot^2>
};

struct ACoefficients {
  double A11 = 0.0;
  double A12 = 0.0;
  double A22 = 0.0;
};

struct EvolutionCoefficients {
  double t = 0.0;
  GreenFunction green;
  BathMoments moments;
  ACoefficients a;
};

GreenFunction green_function(const BathParams& bath, double t);
BathMoments bath_moments(const BathParams& bath, double t, const UnitSystem& units = {});
ACoefficients a_coefficients(const BathParams& bath, double sigma, double t, const UnitSystem& units = {});
EvolutionCoefficients evolution_coefficients(const BathParams& bath, double sigma, double t,
                                             const UnitSystem& units = {});

/// How the initial characteristic function is sampled at time t (after the
/// thermal Gaussian factor):
///   derivative_flow: tilde W_0(m Gdot Q + G P, m^2 Gddot Q + m Gdot P)
///   free_particle:   tilde W_0(m Gdot Q + G P, P), the damped free-particle flow
///                    x -> x + G p, p -> m Gdot p.
/// Both reduce to the free shear as gamma -> 0.
enum class Kinematics { derivative_flow, free_particle };

// Which part of the initial Wigner function to evolve (evolution is linear).
enum class WignerTerms { all, lobes, interference };

/// Evolved characteristic function of a position or momentum cat.
std::complex<double> evolve_characteristic(const CatSpec& state, const BathParams& bath, double t,
                                           double Q, double P, Kinematics kinematics = Kinematics::derivative_flow,
                                           WignerTerms terms = WignerTerms::all);

struct EvolutionGridOptions {
  std::size_t n = 1024;  // points per axis, multiple of 4
  double q_half = 0.0;   // position half-width; 0 selects from the state and moments
  double p_half = 0.0;   // momentum half-width; 0 selects from the state and moments
  Kinematics kinematics = Kinematics::derivative_flow;
  WignerTerms terms = WignerTerms::all;
};

struct EvolutionWindow {
  double q_half = 0.0;
  double p_half = 0.0;
};

// Conjugate-grid inverse FFT of evolve_characteristic. The output grid is
// q_a = (a - n/2) dq, p_b = (b - n/2) dp with dq dp = 2 pi hbar / n.
WignerField evolved_wigner(const CatSpec& state, const BathParams& bath, double t,
                           const EvolutionGridOptions& options = {});

// Half-widths chosen for evolved_wigner when the options leave them at 0:
// lobe centre plus 9 standard deviations of the evolved lobe covariance.
EvolutionWindow default_evolution_window(const CatSpec& state, const BathParams& bath, double t,
                                         Kinematics kinematics = Kinematics::derivative_flow);

/// Attenuation exponent of the central interference term. Position cats use
/// the determinant expression in the A-coefficients written without
/// cancellation (exactly 0 at t = 0); momentum cats use the analogous
/// expression for a momentum-space doublet.
double attenuation_exponent(const CatSpec& state, const BathParams& bath, double t,
                            Kinematics kinematics = Kinematics::derivative_flow);
double attenuation_exponent(const BathParams& bath, double sigma, double x0, double t,
                            const UnitSystem& units = {}, Kinematics kinematics = Kinematics::derivative_flow);

struct AttenuationCurve {
  std::vector<double> times;
  std::vector<double> A0;
  std::vector<double> visibility;
};

AttenuationCurve attenuation_curve(const CatSpec& state, const BathParams& bath, std::vector<double> times,
                                   Kinematics kinematics = Kinematics::derivative_flow);

// Central-fringe visibility from the FFT pipeline: interference amplitude at
// the origin over the lobe peak, normalized to its t = 0 value.
double central_visibility(const CatSpec& state, const BathParams& bath, double t,
                          const EvolutionGridOptions& options = {});

// Small-time slope d A0 / dt for a position cat: (2 x0)^2 m k T gamma / hbar^2.
double attenuation_slope(const BathParams& bath, double x0, const UnitSystem& units = {});

struct DecoherenceTime {
  CatKind kind = CatKind::position_cat;
  double tau_formula = 0.0;   // closed-form estimate
  double tau_crossing = 0.0;  // A0(t) = threshold by root finding
  double tau_linear = 0.0;    // threshold / small-time slope of A0
  double threshold = 1.0;
  double relative_error = 0.0;  // (tau_crossing - tau_formula) / tau_formula
};

// tau_1 = hbar^2 / (4 m gamma k T x0^2) for a position cat,
// tau_2 = hbar^4 / (16 m gamma k T p0^2 sigma^4) for a momentum cat.
double decoherence_time_formula(CatKind kind, const BathParams& bath, double sigma, double shift,
                                const UnitSystem& units = {});

DecoherenceTime decoherence_time(const CatSpec& state, const BathParams& bath, double threshold = 1.0,
                                 Kinematics kinematics = Kinematics::derivative_flow);

}  // namespace phasespace

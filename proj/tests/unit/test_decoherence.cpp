#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "phasespace/decoherence.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/field_io.hpp"
#include "phasespace/quadrature.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;

// RK4 for the damped free particle m x'' = -m gamma x' with x(0) = 0, m x'(0) = 1.
GreenFunction integrate_green(const BathParams& b, double t) {
  const int steps = 20000;
  const double h = t / steps;
  double x = 0.0;
  double v = 1.0 / b.m;
  for (int k = 0; k < steps; ++k) {
    auto acc = [&](double vel) { return -b.gamma * vel; };
    const double k1x = v, k1v = acc(v);
    const double k2x = v + 0.5 * h * k1v, k2v = acc(v + 0.5 * h * k1v);
    const double k3x = v + 0.5 * h * k2v, k3v = acc(v + 0.5 * h * k2v);
    const double k4x = v + h * k3v, k4v = acc(v + h * k3v);
    x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {x, v, -b.gamma * v};
}

}  // namespace

TEST(Green, LimitsAndOdeOracle) {
  const BathParams b{1.0, 1.0, 1.0};
  const GreenFunction g0 = green_function(b, 0.0);
  EXPECT_EQ(g0.G, 0.0);
  EXPECT_EQ(g0.Gdot, 1.0);
  EXPECT_EQ(g0.Gddot, -1.0);
  EXPECT_NEAR(green_function(b, 1.0).G, 1.0 - std::exp(-1.0), 1e-15);
  const BathParams heavy{2.5, 0.3, 1.0};
  const GreenFunction ode = integrate_green(heavy, 4.0);
  const GreenFunction g = green_function(heavy, 4.0);
  EXPECT_NEAR(g.G, ode.G, 1e-12);
  EXPECT_NEAR(g.Gdot, ode.Gdot, 1e-12);
  EXPECT_NEAR(g.Gddot, ode.Gddot, 1e-12);
  EXPECT_NEAR(green_function(heavy, 1e4).G, 1.0 / (2.5 * 0.3), 1e-12);
  EXPECT_THROW(green_function(b, -1.0), Error);
  EXPECT_THROW(green_function({1.0, 0.0, 1.0}, 1.0), Error);
}

TEST(BathMoments, ZeroAtOriginEquipartitionAtInfinity) {
  const BathParams b{2.0, 0.5, 3.0};
  const BathMoments m0 = bath_moments(b, 0.0);
  EXPECT_EQ(m0.X2, 0.0);
  EXPECT_EQ(m0.XXdot, 0.0);
  EXPECT_EQ(m0.Xdot2, 0.0);
  EXPECT_NEAR(bath_moments(b, 200.0).Xdot2, 3.0 / 2.0, 1e-12);
}

TEST(BathMoments, CubicOnsetMatchesTaylorCoefficient) {
  const BathParams b{1.0, 1.0, 1.0};
  const double t = 1e-3;
  EXPECT_NEAR(bath_moments(b, t).X2 / (2.0 / 3.0 * t * t * t), 1.0, 0.01);
}

TEST(BathMoments, SeriesAndDirectBranchesAgree) {
  const BathParams b{1.0, 1.0, 4.0};
  const double below = bath_moments(b, 0.1 - 1e-12).X2;
  const double above = bath_moments(b, 0.1 + 1e-12).X2;
  EXPECT_NEAR(below / above, 1.0, 1e-10);
  const double u = 0.05;
  const double direct = 4.0 * (2 * u - (1 - std::exp(-u)) * (3 - std::exp(-u)));
  EXPECT_NEAR(bath_moments(b, u).X2 / direct, 1.0, 1e-9);
}

TEST(ACoefficients, InitialValues) {
  const double s = 0.5;
  const BathParams b{1.0, 0.3, 2.0};
  const ACoefficients a = a_coefficients(b, s, 0.0);
  EXPECT_NEAR(a.A11, s * s, 1e-15);
  EXPECT_NEAR(a.A12, -s * s * 0.3, 1e-15);
  EXPECT_NEAR(a.A22, s * s * 0.09 + 1.0 / (4 * s * s), 1e-15);
}

TEST(ACoefficients, DuplicatePathAtGammaTTwo) {
  const double s = 1.0;
  const BathParams b{1.0, 1.0, 1.0};
  const double t = 2.0;
  const double e = std::exp(-t);
  const double G = 1 - e, Gd = e, Gdd = -e;
  const double X2 = 2 * t - (1 - e) * (3 - e);
  const double XX = 2 * (1 - e) * (1 - e);
  const double Xd2 = 1 - e * e;
  const ACoefficients a = a_coefficients(b, s, t);
  EXPECT_NEAR(a.A11, X2 + Gd * Gd + G * G / 4, 1e-12);
  EXPECT_NEAR(a.A12, XX / 2 + Gd * Gdd + G * Gd / 4, 1e-12);
  EXPECT_NEAR(a.A22, Xd2 + Gdd * Gdd + Gd * Gd / 4, 1e-12);
  EXPECT_GE(a.A11 * a.A22 - a.A12 * a.A12, 0.0);
}

TEST(Characteristic, TracePreservedAndInitialRecovered) {
  const CatSpec cat = make_cat_position(0.5, 2.0);
  const BathParams b{1.0, 0.2, 5.0};
  for (double t : {0.0, 0.3, 2.0, 10.0}) {
    EXPECT_NEAR(evolve_characteristic(cat, b, t, 0.0, 0.0).real(), 1.0, 1e-12);
  }
  const BathParams tiny{1.0, 1e-12, 1.0};
  EXPECT_NEAR(evolve_characteristic(cat, tiny, 0.0, 0.7, -1.3).real(), characteristic_of_cat(0.5, 2.0, 0.7, -1.3), 1e-11);
  EXPECT_THROW(evolve_characteristic(make_compass(0.5, 1, 1), b, 1.0, 0, 0), Error);
}

TEST(EvolvedWigner, InitialFieldMatchesClosedForm) {
  const CatSpec cat = make_cat_position(0.5, 4.5);
  const BathParams b{1.0, 0.1, 10.0};
  EvolutionGridOptions o;
  o.n = 512;
  o.kinematics = Kinematics::free_particle;
  const WignerField w = evolved_wigner(cat, b, 0.0, o);
  const WignerField exact = closed_form_field(*closed_form_for(StateSpec{cat}), w.grid);
  EXPECT_LT(compare_fields(w, exact).max_abs_diff, 1e-6);
}

TEST(EvolvedWigner, NormalizedAfterEvolution) {
  const CatSpec cat = make_cat_position(0.5, 4.5);
  const WignerField w = evolved_wigner(cat, {1.0, 0.01, 1.0}, 1.0, {512});
  EXPECT_NEAR(integrate_2d(w), 1.0, 1e-4);
}

TEST(EvolvedWigner, PurityDecaysAndPositionMarginalStaysPositive) {
  const CatSpec cat = make_cat_position(0.5, 2.0);
  const BathParams b{1.0, 0.1, 10.0};
  double previous = 2.0;
  for (double t : {0.0, 0.01, 0.05, 0.2, 1.0}) {
    const WignerField w = evolved_wigner(cat, b, t, {256});
    const double purity = 2 * kPi * integrate_product(w, w);
    EXPECT_LE(purity, previous + 1e-9) << "t = " << t;
    previous = purity;
    for (std::size_t i = 0; i < w.grid.nx(); ++i) {
      double marginal = 0.0;
      for (std::size_t j = 0; j < w.grid.np(); ++j) marginal += w.at(i, j) * w.grid.dp();
      EXPECT_GE(marginal, -1e-9);
    }
  }
}

TEST(EvolvedWigner, FreeParticleLimitIsShear) {
  const CatSpec cat = make_cat_position(0.5, 2.0);
  const BathParams b{1.0, 1e-12, 1.0};
  const double t = 0.8;
  const WignerField w = evolved_wigner(cat, b, t, {512});
  const ClosedFormWigner w0 = *closed_form_for(StateSpec{cat});
  const WignerField shear = sample_field(w.grid, [&](double x, double p) { return w0(x - p * t, p); });
  EXPECT_LT(compare_fields(w, shear).max_abs_diff, 1e-6);
}

TEST(EvolvedWigner, FreeParticleKinematicsKeepsPacketsInPlace) {
  const CatSpec cat = make_cat_position(0.5, 4.5);
  const BathParams b{1.0, 0.1, 10.0};
  EvolutionGridOptions o;
  o.n = 512;
  o.kinematics = Kinematics::free_particle;
  o.terms = WignerTerms::lobes;
  const WignerField w = evolved_wigner(cat, b, 0.5, o);
  std::size_t best = 0;
  for (std::size_t k = 0; k < w.values.size(); ++k) {
    if (w.values[k] > w.values[best]) best = k;
  }
  const double x_peak = std::abs(w.grid.x(best / w.grid.np()));
  EXPECT_LT(std::abs(x_peak - 4.5), 2 * w.grid.dx());
}

TEST(Attenuation, ZeroAtStartLinearOnsetMonotone) {
  const BathParams b{1.0, 1.0, 1.0};
  EXPECT_EQ(attenuation_exponent(b, 0.5, 4.5, 0.0), 0.0);
  const double t = 1e-4;
  EXPECT_NEAR(attenuation_exponent(b, 0.5, 4.5, t) / t / attenuation_slope(b, 4.5), 1.0, 0.02);
  double prev = 0.0;
  for (int k = 1; k <= 500; ++k) {
    const double a = attenuation_exponent(b, 0.5, 4.5, 0.01 * k);
    EXPECT_GE(a, prev);
    prev = a;
  }
}

TEST(Attenuation, MatchesDeterminantForm) {
  const BathParams b{1.0, 0.4, 3.0};
  const double s = 0.7;
  const double x0 = 2.0;
  const double t = 0.9;
  const ACoefficients a = a_coefficients(b, s, t);
  const GreenFunction g = green_function(b, t);
  const double k = 1.0 / (4 * s * s);
  const double num = (a.A11 - k * g.G * g.G) * (a.A22 - k * g.Gdot * g.Gdot) - std::pow(a.A12 - k * g.G * g.Gdot, 2);
  const double expected = num / (a.A11 * a.A22 - a.A12 * a.A12) * x0 * x0 / (2 * s * s);
  EXPECT_NEAR(attenuation_exponent(b, s, x0, t) / expected, 1.0, 1e-10);
}

TEST(Visibility, CentralFringeFollowsAttenuation) {
  const CatSpec cat = make_cat_position(0.5, 4.5);
  const BathParams b{1.0, 0.1, 10.0};
  for (double gt : {0.001, 0.01}) {
    const double t = gt / b.gamma;
    const double v = central_visibility(cat, b, t, {512});
    EXPECT_NEAR(v / std::exp(-attenuation_exponent(cat, b, t)), 1.0, 0.05) << "gamma t = " << gt;
  }
}

TEST(DecoherenceTime, FormulaArithmetic) {
  const BathParams b{1.0, 1.0, 1.0};
  EXPECT_NEAR(decoherence_time_formula(CatKind::position_cat, b, 0.5, 4.5), 1.0 / 81.0, 1e-15);
  EXPECT_NEAR(decoherence_time_formula(CatKind::momentum_cat, b, 0.5, 10.0), 0.01, 1e-15);
  EXPECT_NEAR(decoherence_time_formula(CatKind::position_cat, b, 0.5, 9.0) * 4,
              decoherence_time_formula(CatKind::position_cat, b, 0.5, 4.5), 1e-15);
}

TEST(DecoherenceTime, PositionCrossingNearFormula) {
  const DecoherenceTime d = decoherence_time(make_cat_position(0.5, 4.5), {1.0, 0.1, 10.0});
  EXPECT_NEAR(attenuation_exponent(make_cat_position(0.5, 4.5), {1.0, 0.1, 10.0}, d.tau_crossing), 1.0, 1e-9);
  EXPECT_LT(std::abs(d.relative_error), 0.1);
  EXPECT_NEAR(d.tau_linear / d.tau_formula, 1.0, 0.01);
}

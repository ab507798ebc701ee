#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "phasespace/errors.hpp"
#include "phasespace/metrology.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form unit overlap of the displaced equal mixture in the large-separation limit.
double unit_overlap(double s, double x0, double p0, double d1, double d2) {
  const double g = std::exp(-d2 * d2 / (4 * s * s) - s * s * d1 * d1);
  return g * (2 + std::cos(2 * d1 * x0) + std::cos(2 * d2 * p0)) / 4;
}

// First local minimum of the oracle along one axis, by dense scan.
double oracle_axis_minimum(double s, double x0, double p0, bool along_delta1, double limit) {
  auto f = [&](double d) { return along_delta1 ? unit_overlap(s, x0, p0, d, 0.0) : unit_overlap(s, x0, p0, 0.0, d); };
  const double h = limit * 1e-6;
  double prev = f(0.0);
  for (double d = h; d < limit; d += h) {
    const double v = f(d);
    if (v > prev) return d - h;
    prev = v;
  }
  return limit;
}

struct Fixture {
  double sigma;
  double x0;
  double p0;
  StateSpec state;
  OverlapEvaluator overlap;

  Fixture(double s, double x, double p)
      : sigma(s), x0(x), p0(p),
        state(make_mixed(make_cat_position(s, x), make_cat_momentum(s, p), 0.5)),
        overlap(field_function(state), overlap_grid(state)) {}
};

}  // namespace

TEST(Overlap, ZeroDisplacementIsPurityOverTwoPiHbar) {
  const Fixture f(0.5, 4.5, 10.0);
  EXPECT_NEAR(f.overlap.at_zero(), 1.0 / (4 * kPi), 1e-9);
  EXPECT_DOUBLE_EQ(f.overlap.unit(0.0, 0.0), 1.0);
}

TEST(Overlap, MatchesDerivedExpression) {
  const Fixture f(0.5, 4.5, 10.0);
  for (auto [d1, d2] : {std::pair{0.1, 0.0}, {0.0, 0.05}, {kPi / 9, kPi / 40}, {0.3, 0.12}, {0.5, 0.2}}) {
    EXPECT_NEAR(f.overlap.unit(d1, d2), unit_overlap(0.5, 4.5, 10.0, d1, d2), 1e-8) << d1 << ", " << d2;
  }
}

TEST(Overlap, FitGivesQuarterQuarterHalf) {
  EXPECT_NEAR(overlap_closed_form(0.5, 4.5, 10.0, 0.0, 0.0), 8.0 / (2 * kPi), 1e-15);
  const Fixture f(0.5, 4.5, 10.0);
  const auto c = fit_overlap_coefficients(f.overlap, 0.5, 4.5, 10.0, default_bracket(4.5, 10.0), 7);
  EXPECT_NEAR(c.a, 0.25, 1e-6);
  EXPECT_NEAR(c.b, 0.25, 1e-6);
  EXPECT_NEAR(c.c, 0.5, 1e-6);
  EXPECT_LT(c.rms_residual, 1e-6);
}

TEST(Orthogonality, AxisSearchesStallNearOneHalf) {
  const Fixture f(0.5, 4.5, 10.0);
  const auto b = default_bracket(4.5, 10.0);
  const auto r1 = find_orthogonality(f.overlap, SearchMode::delta1_axis, b);
  EXPECT_NEAR(r1.delta1_star, oracle_axis_minimum(0.5, 4.5, 10.0, true, b.delta1_max), 1e-4);
  EXPECT_GT(r1.overlap_at_star, 0.4);
  EXPECT_FALSE(r1.converged);
  const auto r2 = find_orthogonality(f.overlap, SearchMode::delta2_axis, b);
  EXPECT_NEAR(r2.delta2_star, oracle_axis_minimum(0.5, 4.5, 10.0, false, b.delta2_max), 1e-4);
  EXPECT_FALSE(r2.converged);
}

TEST(Orthogonality, JointSearchFindsBothHalfPeriods) {
  const Fixture f(0.5, 4.5, 10.0);
  const auto r = find_orthogonality(f.overlap, SearchMode::joint, default_bracket(4.5, 10.0));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::abs(r.overlap_at_star), 0.02);
  EXPECT_NEAR(r.delta1_star / (kPi / 9.0), 1.0, 0.02);
  EXPECT_NEAR(r.delta2_star / (kPi / 20.0), 1.0, 0.02);
  EXPECT_NEAR(r.product / (kPi * kPi / (4 * 45.0)), 1.0, 0.05);
}

TEST(Orthogonality, EmptyBracketIsSearchError) {
  const Fixture f(0.5, 4.5, 10.0);
  try {
    find_orthogonality(f.overlap, SearchMode::delta1_axis, {0.05, 0.01});
    FAIL() << "expected search error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::search);
  }
}

TEST(Orthogonality, CompassWithinFactorTwoOfMixture) {
  const auto c = compare_with_compass(0.5, 3.0, 6.0);
  EXPECT_TRUE(c.mixed.converged);
  EXPECT_TRUE(c.compass.converged);
  EXPECT_GT(c.ratio, 0.5);
  EXPECT_LT(c.ratio, 2.0);
}

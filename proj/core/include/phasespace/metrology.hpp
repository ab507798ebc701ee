#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/quadrature.hpp"
#include "phasespace/state_spec.hpp"
#include "phasespace/units.hpp"

namespace phasespace {

// Produces W sampled on an arbitrary grid (closed form or oracle).
using FieldFunction = std::function<WignerField(const PhaseSpaceGrid&)>;

FieldFunction field_function(const StateSpec& state);

// Integration lattice covering the state's default window, spaced to resolve
// the product W * W' of two interference patterns.
PhaseSpaceGrid overlap_grid(const StateSpec& state);

/// O(delta1, delta2) = int W(x, p) W(x + delta2, p + delta1) dx dp.
/// delta1 displaces momentum, delta2 displaces position.
class OverlapEvaluator {
 public:
  OverlapEvaluator(FieldFunction field, PhaseSpaceGrid grid,
                   QuadratureRule rule = QuadratureRule::trapezoid);

  double raw(double delta1, double delta2) const;
  double unit(double delta1, double delta2) const { return raw(delta1, delta2) / at_zero_; }
  double at_zero() const noexcept { return at_zero_; }
  const PhaseSpaceGrid& grid() const noexcept { return grid_; }

 private:
  FieldFunction field_;
  PhaseSpaceGrid grid_;
  QuadratureRule rule_;
  WignerField base_;
  double at_zero_;
};

enum class OverlapNormalization { raw, unit_at_zero };

struct OverlapScan {
  std::vector<double> delta1_values;
  std::vector<double> delta2_values;
  std::vector<double> overlaps;  // row-major, delta1 outer
  OverlapNormalization normalization = OverlapNormalization::unit_at_zero;

  double at(std::size_t i, std::size_t j) const { return overlaps[i * delta2_values.size() + j]; }
};

OverlapScan scan_overlap(const OverlapEvaluator& overlap, std::vector<double> delta1_values,
                         std::vector<double> delta2_values,
                         OverlapNormalization normalization = OverlapNormalization::unit_at_zero);

// Large-separation expression with coefficients (2, 3, 3)
//   exp(-d1^2 s^2/hbar^2 - d2^2/4 s^2) [2 cos(2 d2 p0/hbar) + 3 cos(2 d1 x0/hbar) + 3] / (2 pi hbar),
// kept for side-by-side comparison with the numeric integral.
double overlap_closed_form(double sigma, double x0, double p0, double delta1, double delta2,
                           const UnitSystem& units = {});

enum class SearchMode { delta1_axis, delta2_axis, joint };

struct SearchBracket {
  double delta1_max = 0.0;
  double delta2_max = 0.0;
};

struct OrthogonalityOptions {
  double tolerance = 0.02;
  int samples = 64;
  int max_iterations = 20;
};

struct SensitivityResult {
  double delta1_star = 0.0;
  double delta2_star = 0.0;
  double product = 0.0;
  double overlap_at_star = 0.0;   // unit-normalized
  double axis_delta1 = 0.0;       // first minimum along delta2 = 0
  double axis_delta2 = 0.0;       // first minimum along delta1 = 0
  double axis_overlap1 = 0.0;
  double axis_overlap2 = 0.0;
  bool converged = false;
  int iterations = 0;
};

SensitivityResult find_orthogonality(const OverlapEvaluator& overlap, SearchMode mode,
                                     SearchBracket bracket, const OrthogonalityOptions& options = {});

// Bracket of 2 pi hbar / x0 and 2 pi hbar / p0 (one full fringe period beyond the first zero).
SearchBracket default_bracket(double x0, double p0, const UnitSystem& units = {});

struct CompassComparison {
  SensitivityResult mixed;
  SensitivityResult compass;
  double ratio = 0.0;  // compass product / mixed product
};

CompassComparison compare_with_compass(double sigma, double x0, double p0, const UnitSystem& units = {},
                                       const OrthogonalityOptions& options = {});

/// Least-squares fit unit / exp(-d1^2 s^2/hbar^2 - d2^2/4 s^2)
///   ~ a cos(2 d2 p0/hbar) + b cos(2 d1 x0/hbar) + c.
struct OverlapCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
};

OverlapCoefficients fit_overlap_coefficients(const OverlapEvaluator& overlap, double sigma, double x0,
                                             double p0, SearchBracket bracket, int samples = 9,
                                             const UnitSystem& units = {});

}  // namespace phasespace

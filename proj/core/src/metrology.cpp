#include "phasespace/metrology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "phasespace/errors.hpp"
#include "phasespace/wigner.hpp"
#include "search.hpp"

namespace phasespace {

namespace {

struct Extent {
  double x_shift = 0.0;  // largest component |x0|
  double p_shift = 0.0;  // largest component |p0|
  double sigma = 1.0;    // narrowest width
  double hbar = 1.0;
};

void absorb(Extent& e, const CatSpec& s, bool& first) {
  for (const auto& c : s.components) {
    e.x_shift = std::max(e.x_shift, std::abs(c.x0));
    e.p_shift = std::max(e.p_shift, std::abs(c.p0));
    e.sigma = first ? c.sigma : std::min(e.sigma, c.sigma);
    first = false;
  }
  e.hbar = s.units.hbar;
}

Extent extent_of(const StateSpec& state) {
  Extent e;
  bool first = true;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CatSpec>) {
          absorb(e, s, first);
        } else if constexpr (std::is_same_v<T, MixedSpec>) {
          for (const auto& b : s.branches) absorb(e, b.state, first);
        } else {
          const double sr = s.convention.sigma_ref;
          const double a = std::abs(s.alpha);
          e.x_shift = 2.0 * sr * a;
          e.p_shift = s.units.hbar * a / sr;
          e.sigma = sr;
          e.hbar = s.units.hbar;
        }
      },
      state);
  return e;
}

// First interior local minimum of |f| on a uniform sampling of (lo, hi],
// refined by golden section. Throws search if |f| has no interior minimum.
std::pair<double, double> first_abs_minimum(const std::function<double(double)>& f, double lo, double hi,
                                            int samples) {
  require(hi > lo && samples >= 3, ErrorCode::argument, "search bracket must be non-empty");
  const double step = (hi - lo) / samples;
  std::vector<double> v(static_cast<std::size_t>(samples) + 1);
  for (int k = 0; k <= samples; ++k) v[static_cast<std::size_t>(k)] = std::abs(f(lo + k * step));
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    if (v[k] <= v[k - 1] && v[k] < v[k + 1]) {
      const double c = lo + static_cast<double>(k) * step;
      return detail::golden_section_min([&](double t) { return std::abs(f(t)); }, c - step, c + step,
                                        1e-12 * std::max(1.0, std::abs(c)));
    }
  }
  fail(ErrorCode::search, "overlap has no local minimum inside the search bracket");
}

}  // namespace

FieldFunction field_function(const StateSpec& state) {
  return [state](const PhaseSpaceGrid& grid) { return wigner_field(state, grid, Coverage::skip); };
}

PhaseSpaceGrid overlap_grid(const StateSpec& state) {
  const Extent e = extent_of(state);
  const double hb = e.hbar;
  const double xh = e.x_shift + 8.0 * e.sigma;
  const double ph = e.p_shift + 8.0 * hb / (2.0 * e.sigma);
  const double dx = std::numbers::pi / (4.0 * e.p_shift / hb + 2.0 * std::sqrt(80.0) / e.sigma);
  const double dp = std::numbers::pi / (4.0 * e.x_shift / hb + 2.0 * std::sqrt(320.0) * e.sigma / hb);
  const auto nx = static_cast<std::size_t>(std::ceil(2.0 * xh / dx)) + 1;
  const auto np = static_cast<std::size_t>(std::ceil(2.0 * ph / dp)) + 1;
  return PhaseSpaceGrid({-xh, xh, -ph, ph}, nx, np);
}

OverlapEvaluator::OverlapEvaluator(FieldFunction field, PhaseSpaceGrid grid, QuadratureRule rule)
    : field_(std::move(field)), grid_(grid), rule_(rule), base_(field_(grid_)) {
  require(base_.all_finite(), ErrorCode::invalid_field, "overlap base field is not finite");
  at_zero_ = integrate_product(base_, base_, rule_);
  require(at_zero_ > 0.0, ErrorCode::numeric, "overlap at zero displacement must be positive");
}

double OverlapEvaluator::raw(double delta1, double delta2) const {
  require(std::isfinite(delta1) && std::isfinite(delta2), ErrorCode::argument, "displacements must be finite");
  if (delta1 == 0.0 && delta2 == 0.0) return at_zero_;
  const WignerField shifted = field_(grid_.shifted(delta2, delta1));
  return integrate_product(base_, shifted, rule_);
}

OverlapScan scan_overlap(const OverlapEvaluator& overlap, std::vector<double> delta1_values,
                         std::vector<double> delta2_values, OverlapNormalization normalization) {
  OverlapScan scan;
  scan.delta1_values = std::move(delta1_values);
  scan.delta2_values = std::move(delta2_values);
  scan.normalization = normalization;
  scan.overlaps.reserve(scan.delta1_values.size() * scan.delta2_values.size());
  for (double d1 : scan.delta1_values) {
    for (double d2 : scan.delta2_values) {
      scan.overlaps.push_back(normalization == OverlapNormalization::raw ? overlap.raw(d1, d2)
                                                                         : overlap.unit(d1, d2));
    }
  }
  return scan;
}

double overlap_closed_form(double sigma, double x0, double p0, double delta1, double delta2,
                           const UnitSystem& units) {
  const double hb = units.hbar;
  const double g = std::exp(-delta1 * delta1 * sigma * sigma / (hb * hb) - delta2 * delta2 / (4.0 * sigma * sigma));
  return g * (2.0 * std::cos(2.0 * delta2 * p0 / hb) + 3.0 * std::cos(2.0 * delta1 * x0 / hb) + 3.0) /
         (2.0 * std::numbers::pi * hb);
}

SearchBracket default_bracket(double x0, double p0, const UnitSystem& units) {
  require(x0 > 0.0 && p0 > 0.0, ErrorCode::argument, "bracket needs x0 > 0 and p0 > 0");
  return {2.0 * std::numbers::pi * units.hbar / x0, 2.0 * std::numbers::pi * units.hbar / p0};
}

SensitivityResult find_orthogonality(const OverlapEvaluator& overlap, SearchMode mode, SearchBracket bracket,
                                     const OrthogonalityOptions& options) {
  SensitivityResult r;
  auto along1 = [&](double d1) { return overlap.unit(d1, 0.0); };
  auto along2 = [&](double d2) { return overlap.unit(0.0, d2); };

  if (mode != SearchMode::delta2_axis) {
    require(bracket.delta1_max > 0.0, ErrorCode::argument, "delta1 bracket must be positive");
    std::tie(r.axis_delta1, r.axis_overlap1) = first_abs_minimum(along1, 0.0, bracket.delta1_max, options.samples);
  }
  if (mode != SearchMode::delta1_axis) {
    require(bracket.delta2_max > 0.0, ErrorCode::argument, "delta2 bracket must be positive");
    std::tie(r.axis_delta2, r.axis_overlap2) = first_abs_minimum(along2, 0.0, bracket.delta2_max, options.samples);
  }

  switch (mode) {
    case SearchMode::delta1_axis:
      r.delta1_star = r.axis_delta1;
      r.overlap_at_star = overlap.unit(r.delta1_star, 0.0);
      break;
    case SearchMode::delta2_axis:
      r.delta2_star = r.axis_delta2;
      r.overlap_at_star = overlap.unit(0.0, r.delta2_star);
      break;
    case SearchMode::joint: {
      const double a1 = r.axis_delta1;
      const double a2 = r.axis_delta2;
      auto ray = [&](double t) { return overlap.unit(t * a1, t * a2); };
      const auto [t, value] = first_abs_minimum(ray, 0.0, 1.5, options.samples);
      r.delta1_star = t * a1;
      r.delta2_star = t * a2;
      r.overlap_at_star = ray(t);
      (void)value;
      // Alternating coordinate refinement, only when the ray minimum is not orthogonal.
      while (std::abs(r.overlap_at_star) > options.tolerance && r.iterations < options.max_iterations) {
        ++r.iterations;
        const double d2 = r.delta2_star;
        auto f1 = [&](double d1) { return std::abs(overlap.unit(d1, d2)); };
        r.delta1_star = detail::golden_section_min(f1, 0.5 * r.delta1_star, 1.5 * r.delta1_star, 1e-10).first;
        const double d1 = r.delta1_star;
        auto f2 = [&](double d) { return std::abs(overlap.unit(d1, d)); };
        r.delta2_star = detail::golden_section_min(f2, 0.5 * r.delta2_star, 1.5 * r.delta2_star, 1e-10).first;
        r.overlap_at_star = overlap.unit(r.delta1_star, r.delta2_star);
      }
      break;
    }
  }
  r.product = r.delta1_star * r.delta2_star;
  r.converged = std::abs(r.overlap_at_star) < options.tolerance;
  return r;
}

CompassComparison compare_with_compass(double sigma, double x0, double p0, const UnitSystem& units,
                                       const OrthogonalityOptions& options) {
  const StateSpec mixed = make_mixed(make_cat_position(sigma, x0, units), make_cat_momentum(sigma, p0, units), 0.5);
  const StateSpec compass = make_compass(sigma, x0, p0, units);
  const SearchBracket bracket = default_bracket(x0, p0, units);
  CompassComparison out;
  const OverlapEvaluator om(field_function(mixed), overlap_grid(mixed));
  out.mixed = find_orthogonality(om, SearchMode::joint, bracket, options);
  const OverlapEvaluator oc(field_function(compass), overlap_grid(compass));
  out.compass = find_orthogonality(oc, SearchMode::joint, bracket, options);
  require(out.mixed.product > 0.0, ErrorCode::search, "mixed-state search returned a zero product");
  out.ratio = out.compass.product / out.mixed.product;
  return out;
}

OverlapCoefficients fit_overlap_coefficients(const OverlapEvaluator& overlap, double sigma, double x0, double p0,
                                             SearchBracket bracket, int samples, const UnitSystem& units) {
  require(samples >= 2, ErrorCode::argument, "fit needs at least 2 samples per axis");
  const double hb = units.hbar;
  std::array<std::array<double, 3>, 3> ata{};
  std::array<double, 3> aty{};
  std::vector<std::pair<std::array<double, 3>, double>> rows;
  for (int i = 0; i < samples; ++i) {
    const double d1 = bracket.delta1_max * i / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double d2 = bracket.delta2_max * j / (samples - 1);
      const double g = std::exp(-d1 * d1 * sigma * sigma / (hb * hb) - d2 * d2 / (4.0 * sigma * sigma));
      const double y = overlap.unit(d1, d2) / g;
      const std::array<double, 3> basis{std::cos(2.0 * d2 * p0 / hb), std::cos(2.0 * d1 * x0 / hb), 1.0};
      for (int a = 0; a < 3; ++a) {
        aty[a] += basis[a] * y;
        for (int b = 0; b < 3; ++b) ata[a][b] += basis[a] * basis[b];
      }
      rows.emplace_back(basis, y);
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal equations.
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(ata[r][c]) > std::abs(ata[piv][c])) piv = r;
    }
    std::swap(ata[c], ata[piv]);
    std::swap(aty[c], aty[piv]);
    require(std::abs(ata[c][c]) > 1e-14, ErrorCode::numeric, "overlap fit is degenerate for this bracket");
    for (int r = c + 1; r < 3; ++r) {
      const double f = ata[r][c] / ata[c][c];
      for (int k = c; k < 3; ++k) ata[r][k] -= f * ata[c][k];
      aty[r] -= f * aty[c];
    }
  }
  std::array<double, 3> coef{};
  for (int c = 2; c >= 0; --c) {
    double s = aty[c];
    for (int k = c + 1; k < 3; ++k) s -= ata[c][k] * coef[k];
    coef[c] = s / ata[c][c];
  }
  double ss = 0.0;
  for (const auto& [basis, y] : rows) {
    const double fit = coef[0] * basis[0] + coef[1] * basis[1] + coef[2] * basis[2];
    ss += (fit - y) * (fit - y);
  }
  return {coef[0], coef[1], coef[2], std::sqrt(ss / static_cast<double>(rows.size()))};
}

}  // namespace phasespace

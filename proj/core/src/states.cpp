#include "phasespace/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

void require_sigma(double sigma) {
  require(std::isfinite(sigma) && sigma > 0.0, ErrorCode::argument, "sigma must be positive");
}

void require_finite(double v, const char* name) {
  require(std::isfinite(v), ErrorCode::argument, std::string(name) + " must be finite");
}

double min_sigma(const std::vector<GaussianComponent>& components) {
  double s = components.front().sigma;
  for (const auto& c : components) s = std::min(s, c.sigma);
  return s;
}

// Uniform lattice over the joint support, fine enough to resolve every
// component pair's beat frequency to roughly exp(-70).
struct Lattice {
  double x_min;
  double h;
  std::size_t n;
};

Lattice quadrature_lattice(const std::vector<GaussianComponent>& a, const std::vector<GaussianComponent>& b,
                           double hbar) {
  double lo = a.front().x0;
  double hi = lo;
  double s_min = a.front().sigma;
  double p_max = 0.0;
  for (const auto* set : {&a, &b}) {
    for (const auto& c : *set) {
      lo = std::min(lo, c.x0 - 12.0 * c.sigma);
      hi = std::max(hi, c.x0 + 12.0 * c.sigma);
      s_min = std::min(s_min, c.sigma);
      p_max = std::max(p_max, std::abs(c.p0));
    }
  }
  const double h = std::min(0.5 * s_min, 2.0 * std::numbers::pi / (2.0 * p_max / hbar + 24.0 / s_min));
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
  return {lo, (hi - lo) / static_cast<double>(n - 1), n};
}

complex sum_components(const std::vector<GaussianComponent>& components, double x, double hbar) {
  complex s{0.0, 0.0};
  for (const auto& c : components) s += c(x, hbar);
  return s;
}

void validate_components(const std::vector<GaussianComponent>& components) {
  require(!components.empty(), ErrorCode::argument, "superposition needs at least one component");
  for (const auto& c : components) {
    require_sigma(c.sigma);
    require_finite(c.x0, "x0");
    require_finite(c.p0, "p0");
    require_finite(c.phase, "phase");
    require(std::isfinite(c.coefficient.real()) && std::isfinite(c.coefficient.imag()), ErrorCode::argument,
            "coefficient must be finite");
  }
}

}  // namespace

complex GaussianComponent::operator()(double x, double hbar) const {
  const double amplitude = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  const double d = x - x0;
  const double envelope = amplitude * std::exp(-d * d / (4.0 * sigma * sigma));
  return coefficient * std::polar(envelope, p0 * x / hbar + phase);
}

double position_cat_norm(double sigma, double x0) {
  require_sigma(sigma);
  return 1.0 / std::sqrt(2.0 * (std::exp(-x0 * x0 / (2.0 * sigma * sigma)) + 1.0));
}

double momentum_cat_norm(double sigma, double p0, const UnitSystem& units) {
  require_sigma(sigma);
  units.validate();
  const double r = p0 * sigma / units.hbar;
  return 1.0 / std::sqrt(2.0 * (std::exp(-2.0 * r * r) + 1.0));
}

CatSpec make_cat_position(double sigma, double x0, const UnitSystem& units) {
  require_sigma(sigma);
  require_finite(x0, "x0");
  units.validate();
  CatSpec s;
  s.components = {{sigma, x0, 0.0, 0.0, {1.0, 0.0}}, {sigma, -x0, 0.0, 0.0, {1.0, 0.0}}};
  s.norm = position_cat_norm(sigma, x0);
  s.kind = CatKind::position_cat;
  s.sigma = sigma;
  s.x0 = x0;
  s.units = units;
  return s;
}

CatSpec make_cat_momentum(double sigma, double p0, const UnitSystem& units) {
  require_sigma(sigma);
  require_finite(p0, "p0");
  units.validate();
  CatSpec s;
  s.components = {{sigma, 0.0, p0, 0.0, {1.0, 0.0}}, {sigma, 0.0, -p0, 0.0, {1.0, 0.0}}};
  s.norm = momentum_cat_norm(sigma, p0, units);
  s.kind = CatKind::momentum_cat;
  s.sigma = sigma;
  s.p0 = p0;
  s.units = units;
  return s;
}

CatSpec make_compass(double sigma, double x0, double p0, const UnitSystem& units) {
  require_sigma(sigma);
  require_finite(x0, "x0");
  require_finite(p0, "p0");
  CatSpec s = make_superposition({{sigma, x0, 0.0, 0.0, {1.0, 0.0}},
                                  {sigma, -x0, 0.0, 0.0, {1.0, 0.0}},
                                  {sigma, 0.0, p0, 0.0, {1.0, 0.0}},
                                  {sigma, 0.0, -p0, 0.0, {1.0, 0.0}}},
                                 units);
  s.kind = CatKind::compass;
  s.sigma = sigma;
  s.x0 = x0;
  s.p0 = p0;
  return s;
}

CatSpec make_superposition(std::vector<GaussianComponent> components, const UnitSystem& units) {
  validate_components(components);
  units.validate();
  const double n2 = norm_squared_by_quadrature(components, units.hbar);
  require(n2 > 1e-300, ErrorCode::argument, "superposition has zero norm");
  CatSpec s;
  s.components = std::move(components);
  s.norm = 1.0 / std::sqrt(n2);
  s.kind = CatKind::generic;
  s.sigma = min_sigma(s.components);
  s.units = units;
  return s;
}

MixedSpec make_mixed(CatSpec cat1, CatSpec cat2, double p) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorCode::argument, "mixture probability must lie in [0, 1]");
  MixedSpec m;
  m.branches.push_back({p, std::move(cat1)});
  m.branches.push_back({1.0 - p, std::move(cat2)});
  return m;
}

complex psi_eval(const CatSpec& state, double x) {
  return state.norm * sum_components(state.components, x, state.units.hbar);
}

double norm_squared_by_quadrature(const std::vector<GaussianComponent>& components, double hbar) {
  validate_components(components);
  const Lattice lat = quadrature_lattice(components, components, hbar);
  double sum = 0.0;
  for (std::size_t k = 0; k < lat.n; ++k) {
    const double x = lat.x_min + static_cast<double>(k) * lat.h;
    sum += std::norm(sum_components(components, x, hbar));
  }
  return sum * lat.h;
}

complex inner_product(const CatSpec& a, const CatSpec& b) {
  const double hbar = a.units.hbar;
  const Lattice lat = quadrature_lattice(a.components, b.components, hbar);
  complex sum{0.0, 0.0};
  for (std::size_t k = 0; k < lat.n; ++k) {
    const double x = lat.x_min + static_cast<double>(k) * lat.h;
    sum += std::conj(sum_components(a.components, x, hbar)) * sum_components(b.components, x, hbar);
  }
  return a.norm * b.norm * sum * lat.h;
}

Interval position_support(const CatSpec& state) {
  Interval iv{state.components.front().x0, state.components.front().x0};
  for (const auto& c : state.components) {
    iv.lo = std::min(iv.lo, c.x0 - 12.0 * c.sigma);
    iv.hi = std::max(iv.hi, c.x0 + 12.0 * c.sigma);
  }
  return iv;
}

double tail_mass_bound(const CatSpec& state, const Bounds& window) {
  auto outside = [](double lo, double hi, double mean, double sd) {
    return 0.5 * std::erfc((hi - mean) / (std::numbers::sqrt2 * sd)) +
           0.5 * std::erfc((mean - lo) / (std::numbers::sqrt2 * sd));
  };
  const double hbar = state.units.hbar;
  double tails = 0.0;
  for (const auto& c : state.components) {
    const double w = std::norm(c.coefficient);
    tails += w * (outside(window.x_min, window.x_max, c.x0, c.sigma) +
                  outside(window.p_min, window.p_max, c.p0, hbar / (2.0 * c.sigma)));
  }
  const auto k = static_cast<double>(state.components.size());
  return state.norm * state.norm * k * tails;
}

Bounds default_window(const CatSpec& state) {
  const double hbar = state.units.hbar;
  double x_half = 0.0;
  double p_half = 0.0;
  for (const auto& c : state.components) {
    x_half = std::max(x_half, std::abs(c.x0) + 8.0 * c.sigma);
    p_half = std::max(p_half, std::abs(c.p0) + 8.0 * hbar / (2.0 * c.sigma));
  }
  return {-x_half, x_half, -p_half, p_half};
}

Bounds default_window(const MixedSpec& state) {
  require(!state.branches.empty(), ErrorCode::argument, "mixture has no branches");
  Bounds b = default_window(state.branches.front().state);
  for (const auto& br : state.branches) {
    const Bounds o = default_window(br.state);
    b.x_min = std::min(b.x_min, o.x_min);
    b.x_max = std::max(b.x_max, o.x_max);
    b.p_min = std::min(b.p_min, o.p_min);
    b.p_max = std::max(b.p_max, o.p_max);
  }
  return b;
}

double purity_by_quadrature(const MixedSpec& state) {
  double purity = 0.0;
  for (const auto& a : state.branches) {
    for (const auto& b : state.branches) {
      purity += a.probability * b.probability * std::norm(inner_product(a.state, b.state));
    }
  }
  return purity;
}

}  // namespace phasespace

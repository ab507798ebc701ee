#include "phasespace/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phasespace/errors.hpp"
#include "phasespace/parallel.hpp"

namespace phasespace {

namespace {

constexpr double kCoverageLimit = 1e-8;

// Wavefunction plus what the transform needs to pick its y-lattice.
struct PureSource {
  std::function<complex(double)> psi;
  double p_bar_max = 0.0;  // largest component mean momentum
  double sigma_min = 1.0;  // narrowest position width
  Interval support;
  double hbar = 1.0;
};

PureSource source_of(const CatSpec& s) {
  PureSource src;
  src.psi = [&s](double x) { return psi_eval(s, x); };
  src.sigma_min = s.components.front().sigma;
  for (const auto& c : s.components) {
    src.p_bar_max = std::max(src.p_bar_max, std::abs(c.p0));
    src.sigma_min = std::min(src.sigma_min, c.sigma);
  }
  src.support = position_support(s);
  src.hbar = s.units.hbar;
  return src;
}

PureSource source_of(const FockState& s) {
  PureSource src;
  src.psi = [&s](double x) { return fock_wavefunction(s.vector, s.convention, x); };
  const double sr = s.convention.sigma_ref;
  const double a = std::abs(s.alpha);
  src.p_bar_max = s.units.hbar * a / sr;
  src.sigma_min = sr;
  src.support = {-(2.0 * sr * a + 12.0 * sr), 2.0 * sr * a + 12.0 * sr};
  src.hbar = s.units.hbar;
  return src;
}

// Largest y-step keeping the aliased images at least Delta = 1.25 sqrt(20)/sigma
// beyond the grid, i.e. their weight below exp(-60).
double max_y_step(const PureSource& src, double p_abs_max) {
  const double omega = (p_abs_max + src.p_bar_max) / src.hbar;
  const double delta = 1.25 * std::sqrt(20.0) / src.sigma_min;
  return 2.0 * std::numbers::pi / (omega + delta);
}

void check_coverage(const CatSpec& s, const Bounds& b) {
  const double tail = tail_mass_bound(s, b);
  if (tail > kCoverageLimit) {
    std::ostringstream os;
    os << "grid window does not cover the state: tail mass bound " << tail << " exceeds " << kCoverageLimit;
    fail(ErrorCode::coverage, os.str());
  }
}

void check_coverage(const FockState& s, const Bounds& b) {
  // Worst case over centres in [-reach, reach].
  auto outside = [](double lo, double hi, double reach, double sd) {
    return 0.5 * std::erfc((hi - reach) / (std::numbers::sqrt2 * sd)) +
           0.5 * std::erfc((-lo - reach) / (std::numbers::sqrt2 * sd));
  };
  const double sr = s.convention.sigma_ref;
  const double a = std::abs(s.alpha);
  // Every component sits on the ring of radius |alpha|; bound by the farthest placement.
  const double tail = outside(b.x_min, b.x_max, 2.0 * sr * a, sr) +
                      outside(b.p_min, b.p_max, s.units.hbar * a / sr, s.units.hbar / (2.0 * sr));
  if (tail > kCoverageLimit) {
    std::ostringstream os;
    os << "grid window does not cover the Fock state: tail mass bound " << tail << " exceeds " << kCoverageLimit;
    fail(ErrorCode::coverage, os.str());
  }
}

// Trapezoid sum over y on a lattice tied to the x-grid: y_j = j h, h = 2 dx / r,
// so psi(x_i +- y_j / 2) are samples of one table at spacing dx / r.
void transform_pure(const PureSource& src, const PhaseSpaceGrid& grid, double weight, std::vector<double>& out) {
  const double p_abs_max = std::max(std::abs(grid.bounds().p_min), std::abs(grid.bounds().p_max));
  const double dx = grid.dx();
  const auto r = static_cast<long>(std::max(1.0, std::ceil(2.0 * dx / max_y_step(src, p_abs_max))));
  const double step = dx / static_cast<double>(r);
  const double h = 2.0 * step;
  const double x_min = grid.bounds().x_min;

  const auto m_lo = static_cast<long>(std::ceil((src.support.lo - x_min) / step));
  const auto m_hi = static_cast<long>(std::floor((src.support.hi - x_min) / step));
  if (m_hi < m_lo) return;
  std::vector<complex> table(static_cast<std::size_t>(m_hi - m_lo + 1));
  parallel_for(table.size(), [&](std::size_t k) {
    table[k] = src.psi(x_min + static_cast<double>(m_lo + static_cast<long>(k)) * step);
  });

  const std::size_t j_max = static_cast<std::size_t>((m_hi - m_lo) / 2);
  const std::size_t np = grid.np();
  std::vector<double> cos_tab(np * (j_max + 1));
  std::vector<double> sin_tab(np * (j_max + 1));
  parallel_for(np, [&](std::size_t k) {
    const double pk = grid.p(k) / src.hbar;
    for (std::size_t j = 0; j <= j_max; ++j) {
      const double arg = pk * static_cast<double>(j) * h;
      cos_tab[k * (j_max + 1) + j] = std::cos(arg);
      sin_tab[k * (j_max + 1) + j] = std::sin(arg);
    }
  });

  const double scale = weight * h / (2.0 * std::numbers::pi * src.hbar);
  parallel_for(grid.nx(), [&](std::size_t i) {
    const long centre = static_cast<long>(i) * r;
    const long reach = std::min(m_hi - centre, centre - m_lo);
    if (reach < 0) return;
    const auto jn = static_cast<std::size_t>(reach);
    std::vector<double> re(jn + 1);
    std::vector<double> im(jn + 1);
    for (std::size_t j = 0; j <= jn; ++j) {
      const auto jl = static_cast<long>(j);
      const complex f = table[static_cast<std::size_t>(centre + jl - m_lo)] *
                        std::conj(table[static_cast<std::size_t>(centre - jl - m_lo)]);
      re[j] = f.real();
      im[j] = f.imag();
    }
    for (std::size_t k = 0; k < np; ++k) {
      const double* c = &cos_tab[k * (j_max + 1)];
      const double* s = &sin_tab[k * (j_max + 1)];
      double acc = 0.0;
      for (std::size_t j = 1; j <= jn; ++j) acc += re[j] * c[j] + im[j] * s[j];
      out[grid.index(i, k)] += scale * (re[0] + 2.0 * acc);
    }
  });
}

double point_pure(const PureSource& src, double x, double p) {
  const double h = 0.5 * max_y_step(src, std::abs(p));
  const double reach = std::min(src.support.hi - x, x - src.support.lo);
  if (reach < 0.0) return 0.0;
  const auto jn = static_cast<std::size_t>(std::floor(2.0 * reach / h));
  double acc = 0.0;
  double f0 = 0.0;
  for (std::size_t j = 0; j <= jn; ++j) {
    const double y = static_cast<double>(j) * h;
    const complex f = src.psi(x + 0.5 * y) * std::conj(src.psi(x - 0.5 * y));
    if (j == 0) {
      f0 = f.real();
      continue;
    }
    const double arg = p * y / src.hbar;
    acc += f.real() * std::cos(arg) + f.imag() * std::sin(arg);
  }
  return h * (f0 + 2.0 * acc) / (2.0 * std::numbers::pi * src.hbar);
}

void require_closed_inputs(double sigma, const UnitSystem& units) {
  require(std::isfinite(sigma) && sigma > 0.0, ErrorCode::argument, "sigma must be positive");
  require(units.hbar > 0.0, ErrorCode::argument, "hbar must be positive");
}

}  // namespace

double wc1_closed(double sigma, double x0, double x, double p, const UnitSystem& units) {
  require_closed_inputs(sigma, units);
  const double hb = units.hbar;
  const double n2 = std::pow(position_cat_norm(sigma, x0), 2);
  const double s2 = sigma * sigma;
  const double env_p = std::exp(-2.0 * s2 * p * p / (hb * hb));
  const double a = x - x0;
  const double b = x + x0;
  const double bracket = std::exp(-a * a / (2.0 * s2)) + std::exp(-b * b / (2.0 * s2)) +
                         2.0 * std::exp(-x * x / (2.0 * s2)) * std::cos(2.0 * p * x0 / hb);
  return n2 / (std::numbers::pi * hb) * env_p * bracket;
}

double wc2_closed(double sigma, double p0, double x, double p, const UnitSystem& units) {
  require_closed_inputs(sigma, units);
  const double hb = units.hbar;
  const double n2 = std::pow(momentum_cat_norm(sigma, p0, units), 2);
  const double s2 = sigma * sigma;
  const double env_x = std::exp(-x * x / (2.0 * s2));
  const double a = p - p0;
  const double b = p + p0;
  const double k = 2.0 * s2 / (hb * hb);
  const double bracket = std::exp(-k * a * a) + std::exp(-k * b * b) +
                         2.0 * std::exp(-k * p * p) * std::cos(2.0 * p0 * x / hb);
  return n2 / (std::numbers::pi * hb) * env_x * bracket;
}

double wrho_closed(double sigma, double x0, double p0, double x, double p, const UnitSystem& units) {
  return 0.5 * (wc1_closed(sigma, x0, x, p, units) + wc2_closed(sigma, p0, x, p, units));
}

double wrho_perturbed(double sigma, double x0, double p0, double delta1, double delta2, double x, double p,
                      const UnitSystem& units) {
  return wrho_closed(sigma, x0, p0, x + delta2, p + delta1, units);
}

double ClosedFormWigner::operator()(double x, double p) const {
  switch (kind) {
    case ClosedFormKind::cat_position: return wc1_closed(sigma, x0, x, p, units);
    case ClosedFormKind::cat_momentum: return wc2_closed(sigma, p0, x, p, units);
    case ClosedFormKind::mixed:
      return probability * wc1_closed(sigma, x0, x, p, units) +
             (1.0 - probability) * wc2_closed(sigma, p0, x, p, units);
    case ClosedFormKind::perturbed_mixed:
      return probability * wc1_closed(sigma, x0, x + delta2, p + delta1, units) +
             (1.0 - probability) * wc2_closed(sigma, p0, x + delta2, p + delta1, units);
  }
  return 0.0;
}

std::optional<ClosedFormWigner> closed_form_for(const StateSpec& state) {
  if (const auto* c = std::get_if<CatSpec>(&state)) {
    ClosedFormWigner w;
    w.sigma = c->sigma;
    w.units = c->units;
    if (c->kind == CatKind::position_cat) {
      w.kind = ClosedFormKind::cat_position;
      w.x0 = c->x0;
      return w;
    }
    if (c->kind == CatKind::momentum_cat) {
      w.kind = ClosedFormKind::cat_momentum;
      w.p0 = c->p0;
      return w;
    }
    return std::nullopt;
  }
  if (const auto* m = std::get_if<MixedSpec>(&state)) {
    if (m->branches.size() != 2) return std::nullopt;
    const MixedBranch* pos = &m->branches[0];
    const MixedBranch* mom = &m->branches[1];
    if (pos->state.kind != CatKind::position_cat) std::swap(pos, mom);
    if (pos->state.kind != CatKind::position_cat || mom->state.kind != CatKind::momentum_cat) return std::nullopt;
    if (pos->state.sigma != mom->state.sigma || pos->state.units.hbar != mom->state.units.hbar) return std::nullopt;
    ClosedFormWigner w;
    w.kind = ClosedFormKind::mixed;
    w.sigma = pos->state.sigma;
    w.x0 = pos->state.x0;
    w.p0 = mom->state.p0;
    w.probability = pos->probability;
    w.units = pos->state.units;
    return w;
  }
  return std::nullopt;
}

WignerField closed_form_field(const ClosedFormWigner& w, const PhaseSpaceGrid& grid) {
  return sample_field(grid, [&w](double x, double p) { return w(x, p); });
}

WignerField wigner_transform(const StateSpec& state, const PhaseSpaceGrid& grid, Coverage coverage) {
  WignerField field(grid);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MixedSpec>) {
          require(!s.branches.empty(), ErrorCode::argument, "mixture has no branches");
          for (const auto& b : s.branches) {
            if (coverage == Coverage::require) check_coverage(b.state, grid.bounds());
            if (b.probability != 0.0) transform_pure(source_of(b.state), grid, b.probability, field.values);
          }
        } else {
          if (coverage == Coverage::require) check_coverage(s, grid.bounds());
          transform_pure(source_of(s), grid, 1.0, field.values);
        }
      },
      state);
  return field;
}

double wigner_at(const StateSpec& state, double x, double p) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MixedSpec>) {
          double w = 0.0;
          for (const auto& b : s.branches) {
            if (b.probability != 0.0) w += b.probability * point_pure(source_of(b.state), x, p);
          }
          return w;
        } else {
          return point_pure(source_of(s), x, p);
        }
      },
      state);
}

bool has_pair_expansion(const CatSpec& state) {
  return std::all_of(state.components.begin(), state.components.end(),
                     [&](const GaussianComponent& c) { return c.sigma == state.components.front().sigma; });
}

double superposition_wigner(const CatSpec& state, double x, double p) {
  require(has_pair_expansion(state), ErrorCode::argument, "pair expansion needs a common sigma");
  const double hb = state.units.hbar;
  const double s2 = std::pow(state.components.front().sigma, 2);
  double w = 0.0;
  const auto& cs = state.components;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    for (std::size_t k = j; k < cs.size(); ++k) {
      const double xm = 0.5 * (cs[j].x0 + cs[k].x0);
      const double pm = 0.5 * (cs[j].p0 + cs[k].p0);
      const double d = cs[j].x0 - cs[k].x0;
      const double q = cs[j].p0 - cs[k].p0;
      const double env =
          std::exp(-(x - xm) * (x - xm) / (2.0 * s2) - 2.0 * s2 * (p - pm) * (p - pm) / (hb * hb));
      const complex c = cs[j].coefficient * std::conj(cs[k].coefficient) *
                        std::polar(1.0, (q * x + (pm - p) * d) / hb + cs[j].phase - cs[k].phase);
      // The (k, j) term is the complex conjugate of (j, k).
      w += (j == k ? 1.0 : 2.0) * env * c.real();
    }
  }
  return state.norm * state.norm * w / (std::numbers::pi * hb);
}

namespace {

bool pair_expandable(const StateSpec& state) {
  if (const auto* c = std::get_if<CatSpec>(&state)) return has_pair_expansion(*c);
  if (const auto* m = std::get_if<MixedSpec>(&state)) {
    return std::all_of(m->branches.begin(), m->branches.end(),
                       [](const MixedBranch& b) { return has_pair_expansion(b.state); });
  }
  return false;
}

double pair_value(const StateSpec& state, double x, double p) {
  if (const auto* c = std::get_if<CatSpec>(&state)) return superposition_wigner(*c, x, p);
  double w = 0.0;
  for (const auto& b : std::get<MixedSpec>(state).branches) w += b.probability * superposition_wigner(b.state, x, p);
  return w;
}

}  // namespace

WignerField wigner_field(const StateSpec& state, const PhaseSpaceGrid& grid, Coverage coverage) {
  if (const auto cf = closed_form_for(state)) return closed_form_field(*cf, grid);
  if (pair_expandable(state)) {
    return sample_field(grid, [&state](double x, double p) { return pair_value(state, x, p); });
  }
  return wigner_transform(state, grid, coverage);
}

PointFunction wigner_point_function(const StateSpec& state) {
  if (const auto cf = closed_form_for(state)) {
    return [w = *cf](double x, double p) { return w(x, p); };
  }
  if (pair_expandable(state)) {
    return [state](double x, double p) { return pair_value(state, x, p); };
  }
  return [state](double x, double p) { return wigner_at(state, x, p); };
}

double characteristic_of_cat(double sigma, double x0, double Q, double P, const UnitSystem& units) {
  require_closed_inputs(sigma, units);
  const double hb = units.hbar;
  const double s2 = sigma * sigma;
  const double overlap = std::exp(-x0 * x0 / (2.0 * s2));
  const double gauss_p = std::exp(-s2 * P * P / (2.0 * hb * hb));
  const double a = Q - 2.0 * x0;
  const double b = Q + 2.0 * x0;
  const double lobes = std::cos(P * x0 / hb) * gauss_p * std::exp(-Q * Q / (8.0 * s2));
  const double fringe = 0.5 * gauss_p * (std::exp(-a * a / (8.0 * s2)) + std::exp(-b * b / (8.0 * s2)));
  return (lobes + fringe) / (1.0 + overlap);
}

double characteristic_of_momentum_cat(double sigma, double p0, double Q, double P, const UnitSystem& units) {
  require_closed_inputs(sigma, units);
  const double hb = units.hbar;
  const double s2 = sigma * sigma;
  const double overlap = std::exp(-2.0 * s2 * p0 * p0 / (hb * hb));
  const double gauss_q = std::exp(-Q * Q / (8.0 * s2));
  const double a = P - 2.0 * p0;
  const double b = P + 2.0 * p0;
  const double lobes = std::cos(Q * p0 / hb) * gauss_q * std::exp(-s2 * P * P / (2.0 * hb * hb));
  const double fringe =
      0.5 * gauss_q * (std::exp(-s2 * a * a / (2.0 * hb * hb)) + std::exp(-s2 * b * b / (2.0 * hb * hb)));
  return (lobes + fringe) / (1.0 + overlap);
}

}  // namespace phasespace

#include "phasespace/interference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "phasespace/errors.hpp"
#include "phasespace/states.hpp"
#include "search.hpp"

namespace phasespace {

namespace {

struct AxisScan {
  std::vector<double> roots;  // positive sign-change locations
  double touch = 0.0;         // first near-zero local minimum of |W| (0 if none)
  double dip = 0.0;           // first local minimum of |W| below half the reference (0 if none)
};

// Scans f(s) for s in (0, s_max] at step ds.
template <class F>
AxisScan scan_axis(F&& f, double s_max, double ds, double reference, const LatticeOptions& opt) {
  AxisScan out;
  const auto n = static_cast<std::size_t>(std::floor(s_max / ds));
  double prev_s = 0.0;
  double prev = f(0.0);
  double prev_abs_left = std::abs(prev);
  bool touch_found = false;
  for (std::size_t k = 1; k <= n; ++k) {
    const double s = static_cast<double>(k) * ds;
    const double v = f(s);
    // Rounding noise at a double zero must not register as a crossing.
    const bool significant = std::max(std::abs(prev), std::abs(v)) > 1e-9 * std::abs(reference);
    if (significant && prev != 0.0 && v != 0.0 && (v < 0.0) != (prev < 0.0)) {
      out.roots.push_back(detail::bisect_root(f, prev_s, s, prev, opt.tolerance));
    }
    // Local minimum of |f| at prev_s with neighbours prev_abs_left and |v|.
    const bool local_min = k >= 2 && std::abs(prev) <= prev_abs_left && std::abs(prev) < std::abs(v);
    const bool first_dip = local_min && out.dip == 0.0 && std::abs(prev) < 0.5 * std::abs(reference);
    if (first_dip) out.dip = prev_s;
    // Only the first dip can be the touch point; later minima sit under a decayed envelope.
    if (!touch_found && first_dip && std::abs(prev) <= opt.touch_fraction * std::abs(reference)) {
      auto [arg, val] = detail::golden_section_min([&](double t) { return std::abs(f(t)); }, prev_s - ds,
                                                   prev_s + ds, opt.tolerance);
      (void)val;
      out.touch = arg;
      touch_found = true;
    }
    prev_abs_left = std::abs(prev);
    prev_s = s;
    prev = v;
  }
  return out;
}

std::vector<double> mirrored(const std::vector<double>& positive) {
  std::vector<double> all;
  all.reserve(2 * positive.size());
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) all.push_back(-*it);
  all.insert(all.end(), positive.begin(), positive.end());
  return all;
}

void require_resolution(double half_period, double step, int min_nodes, const char* axis) {
  if (half_period / step < static_cast<double>(min_nodes)) {
    std::ostringstream os;
    os << "grid too coarse along " << axis << ": " << half_period / step << " nodes per interference half-period, need "
       << min_nodes;
    fail(ErrorCode::resolution, os.str());
  }
}

}  // namespace

double zero_condition_residual(double sigma, double x0, double p0, double x, double p, const UnitSystem& units) {
  const double hb = units.hbar;
  const double s2 = sigma * sigma;
  const double n1 = std::pow(position_cat_norm(sigma, x0), 2);
  const double n2 = std::pow(momentum_cat_norm(sigma, p0, units), 2);
  const double ex = std::exp(-x0 * x0 / (2.0 * s2));
  const double ep = std::exp(-2.0 * p0 * p0 * s2 / (hb * hb));
  return n1 * ex * (std::exp(-x * x0 / s2) + std::exp(x * x0 / s2)) +
         n2 * ep * (std::exp(-4.0 * p * p0 * s2 / (hb * hb)) + std::exp(4.0 * p * p0 * s2 / (hb * hb))) +
         2.0 * n1 * std::cos(2.0 * p * x0 / hb) + 2.0 * n2 * std::cos(2.0 * p0 * x / hb);
}

bool large_separation(double sigma, double x0, double p0, const UnitSystem& units) {
  const double hb = units.hbar;
  return std::exp(-x0 * x0 / (2.0 * sigma * sigma)) < 1e-8 &&
         std::exp(-2.0 * p0 * p0 * sigma * sigma / (hb * hb)) < 1e-8;
}

std::string to_string(LatticeGeometry g) {
  switch (g) {
    case LatticeGeometry::none: return "none";
    case LatticeGeometry::stripes_x: return "stripes_x";
    case LatticeGeometry::stripes_p: return "stripes_p";
    case LatticeGeometry::rectangular: return "rectangular";
    case LatticeGeometry::diamond: return "diamond";
  }
  return "none";
}

ZeroLattice find_zero_lattice(const WignerField& field, const LatticeOptions& options) {
  require(field.all_finite(), ErrorCode::invalid_field, "field contains non-finite values");
  const auto& g = field.grid;
  const Bounds& b = g.bounds();
  require(g.contains(0.0, 0.0), ErrorCode::argument, "zero-lattice search needs the origin inside the grid");

  const PointFunction eval = options.refine ? options.refine : PointFunction([&field](double x, double p) {
    return interpolate(field, x, p);
  });
  const double env_x = options.envelope_x > 0.0 ? std::min(options.envelope_x, b.x_max) : b.x_max;
  const double env_p = options.envelope_p > 0.0 ? std::min(options.envelope_p, b.p_max) : b.p_max;
  const double w00 = eval(0.0, 0.0);
  require(w00 != 0.0, ErrorCode::numeric, "W vanishes at the origin; no reference for the zero lattice");

  // Axis scans always sample the stored grid nodes' spacing.
  const AxisScan ax = scan_axis([&](double x) { return eval(x, 0.0); }, env_x, g.dx(), w00, options);
  const AxisScan ap = scan_axis([&](double p) { return eval(0.0, p); }, env_p, g.dp(), w00, options);

  ZeroLattice lat;
  const int min_nodes = options.min_nodes_per_half_period;
  if (!ax.roots.empty() || !ap.roots.empty()) {
    if (!ax.roots.empty()) require_resolution(2.0 * ax.roots.front(), g.dx(), min_nodes, "x");
    if (!ap.roots.empty()) require_resolution(2.0 * ap.roots.front(), g.dp(), min_nodes, "p");
    lat.x_lines = mirrored(ax.roots);
    lat.p_lines = mirrored(ap.roots);
    lat.n_max = static_cast<int>(std::max(ax.roots.size(), ap.roots.size()));
    if (!ax.roots.empty() && !ap.roots.empty()) {
      lat.geometry = LatticeGeometry::rectangular;
    } else {
      lat.geometry = ax.roots.empty() ? LatticeGeometry::stripes_p : LatticeGeometry::stripes_x;
    }
    return lat;
  }
  if (ax.touch <= 0.0 || ap.touch <= 0.0) {
    // An unresolved fringe shows up as a shallow dip that the sampling cannot pin to zero.
    if (ax.dip > 0.0 && ax.touch <= 0.0) require_resolution(ax.dip, g.dx(), min_nodes, "x");
    if (ap.dip > 0.0 && ap.touch <= 0.0) require_resolution(ap.dip, g.dp(), min_nodes, "p");
    return lat;
  }

  require_resolution(ax.touch, g.dx(), min_nodes, "x");
  require_resolution(ap.touch, g.dp(), min_nodes, "p");
  lat.geometry = LatticeGeometry::diamond;
  lat.x_touch = ax.touch;
  lat.p_touch = ap.touch;

  // Diagonal zero lines cross the ray t (X, P) at t = n + 1/2.
  const double X = ax.touch;
  const double P = ap.touch;
  auto ray = [&](double t) { return eval(t * X, t * P); };
  const double t_max = std::min(env_x / X, env_p / P);
  const double dt = 0.5 * std::min(g.dx() / X, g.dp() / P);
  const AxisScan along = scan_axis(ray, t_max, dt, w00, options);
  std::vector<double> xs;
  std::vector<double> ps;
  for (double t : along.roots) {
    xs.push_back(t * X);
    ps.push_back(t * P);
  }
  lat.x_lines = mirrored(xs);
  lat.p_lines = mirrored(ps);
  lat.n_max = static_cast<int>(along.roots.size());
  return lat;
}

ZeroLattice predicted_lattice(double x0, double p0, int n_max, const UnitSystem& units) {
  require(x0 > 0.0 && p0 > 0.0, ErrorCode::argument, "predicted lattice needs x0 > 0 and p0 > 0");
  require(n_max >= 0, ErrorCode::argument, "n_max must be non-negative");
  ZeroLattice lat;
  std::vector<double> xs;
  std::vector<double> ps;
  const double hb = units.hbar;
  for (int n = 0; n < n_max; ++n) {
    xs.push_back((2 * n + 1) * std::numbers::pi * hb / (4.0 * p0));
    ps.push_back((2 * n + 1) * std::numbers::pi * hb / (4.0 * x0));
  }
  lat.x_lines = mirrored(xs);
  lat.p_lines = mirrored(ps);
  lat.n_max = n_max;
  lat.geometry = LatticeGeometry::diamond;
  lat.x_touch = std::numbers::pi * hb / (2.0 * p0);
  lat.p_touch = std::numbers::pi * hb / (2.0 * x0);
  return lat;
}

double predicted_tile_area(double x0, double p0, const UnitSystem& units) {
  require(x0 > 0.0 && p0 > 0.0, ErrorCode::argument, "tile area needs x0 > 0 and p0 > 0");
  return std::numbers::pi * std::numbers::pi * units.hbar * units.hbar / (16.0 * x0 * p0);
}

TileArea tile_area(const ZeroLattice& lattice) {
  auto first_positive = [](const std::vector<double>& v) {
    for (double x : v) {
      if (x > 0.0) return x;
    }
    return 0.0;
  };
  const double x_first = first_positive(lattice.x_lines);
  const double p_first = first_positive(lattice.p_lines);
  require(x_first > 0.0 && p_first > 0.0, ErrorCode::search, "lattice has no lines on one of the axes");

  TileArea out;
  out.measured = x_first * p_first;
  out.gap_product = 4.0 * x_first * p_first;
  for (std::size_t i = 0; i + 1 < lattice.x_lines.size(); ++i) {
    for (std::size_t j = 0; j + 1 < lattice.p_lines.size(); ++j) {
      const double gx = lattice.x_lines[i + 1] - lattice.x_lines[i];
      const double gp = lattice.p_lines[j + 1] - lattice.p_lines[j];
      out.tile_areas.push_back(0.25 * gx * gp);
    }
  }
  if (!out.tile_areas.empty()) {
    const auto [lo, hi] = std::minmax_element(out.tile_areas.begin(), out.tile_areas.end());
    double mean = 0.0;
    for (double a : out.tile_areas) mean += a;
    mean /= static_cast<double>(out.tile_areas.size());
    out.spread = (*hi - *lo) / mean;
  }
  return out;
}

CheckerboardReport checkerboard_report(const WignerField& field, const ZeroLattice& lattice, double envelope_x,
                                       double envelope_p, const PointFunction& evaluator) {
  const PointFunction eval = evaluator ? evaluator : PointFunction([&field](double x, double p) {
    return interpolate(field, x, p);
  });
  CheckerboardReport rep;
  rep.geometry = lattice.geometry;
  auto sign_of = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  std::map<std::pair<int, int>, int> signs;

  auto add_tile = [&](int k, int l, double xc, double pc, double area) {
    Tile t{xc, pc, area, sign_of(eval(xc, pc))};
    rep.tiles.push_back(t);
    signs[{k, l}] = t.sign;
    if (t.sign > 0) ++rep.positive;
    if (t.sign < 0) ++rep.negative;
  };

  if (lattice.geometry == LatticeGeometry::diamond) {
    const double X = lattice.x_touch;
    const double P = lattice.p_touch;
    const int kx = static_cast<int>(std::floor(envelope_x / X - 1e-12));
    const int kp = static_cast<int>(std::floor(envelope_p / P - 1e-12));
    for (int k = -kx; k <= kx; ++k) {
      for (int l = -kp; l <= kp; ++l) {
        if ((k + l) % 2 != 0) continue;
        add_tile(k, l, k * X, l * P, 2.0 * X * P);
      }
    }
    for (const auto& [key, s] : signs) {
      for (int dk : {-1, 1}) {
        for (int dl : {-1, 1}) {
          const auto it = signs.find({key.first + dk, key.second + dl});
          if (it != signs.end() && (s == 0 || it->second != -s)) rep.alternates = false;
        }
      }
    }
  } else if (lattice.geometry != LatticeGeometry::none) {
    // Rectangular cells between adjacent lines; an axis without lines is one cell.
    auto cells = [](const std::vector<double>& lines, double env) {
      std::vector<std::pair<double, double>> c;
      if (lines.empty()) {
        c.emplace_back(0.0, 2.0 * env);
        return c;
      }
      for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        const double mid = 0.5 * (lines[i] + lines[i + 1]);
        if (std::abs(mid) < env) c.emplace_back(mid, lines[i + 1] - lines[i]);
      }
      return c;
    };
    const auto cx = cells(lattice.x_lines, envelope_x);
    const auto cp = cells(lattice.p_lines, envelope_p);
    for (std::size_t i = 0; i < cx.size(); ++i) {
      for (std::size_t j = 0; j < cp.size(); ++j) {
        add_tile(static_cast<int>(i), static_cast<int>(j), cx[i].first, cp[j].first, cx[i].second * cp[j].second);
      }
    }
    for (const auto& [key, s] : signs) {
      for (auto [dk, dl] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const auto it = signs.find({key.first + dk, key.second + dl});
        if (it != signs.end() && (s == 0 || it->second != -s)) rep.alternates = false;
      }
    }
  }
  if (rep.tiles.empty()) rep.alternates = false;
  return rep;
}

}  // namespace phasespace

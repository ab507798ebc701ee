#include "phasespace/decoherence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phasespace/errors.hpp"
#include "phasespace/fft2d.hpp"
#include "phasespace/parallel.hpp"
#include "search.hpp"

namespace phasespace {

namespace {

using Vec2 = std::array<double, 2>;  // (P, Q) ordering throughout

struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }
  double quad(const Vec2& v) const { return a11 * v[0] * v[0] + 2.0 * a12 * v[0] * v[1] + a22 * v[1] * v[1]; }
};

struct Model {
  GreenFunction g;
  BathMoments mom;
  Sym2 B;     // bath covariance
  Vec2 u;     // argument of the sigma^2 P'^2 factor
  Vec2 v;     // argument of the Q'^2 / 4 sigma^2 factor
  double sigma = 1.0;
  double hbar = 1.0;
  double k = 0.0;  // hbar^2 / 4 sigma^2
};

void require_time(double t) {
  require(std::isfinite(t) && t >= 0.0, ErrorCode::argument, "time must be finite and non-negative");
}

void require_cat(const CatSpec& s) {
  require(s.kind == CatKind::position_cat || s.kind == CatKind::momentum_cat, ErrorCode::argument,
          "decoherence evolution supports position and momentum cats only");
}

Model model(const BathParams& bath, double sigma, double t, const UnitSystem& units, Kinematics kin) {
  require(std::isfinite(sigma) && sigma > 0.0, ErrorCode::argument, "sigma must be positive");
  Model m;
  m.g = green_function(bath, t);
  m.mom = bath_moments(bath, t, units);
  const double mass = bath.m;
  m.B = {m.mom.X2, 0.5 * mass * m.mom.XXdot, mass * mass * m.mom.Xdot2};
  if (kin == Kinematics::derivative_flow) {
    m.u = {mass * m.g.Gdot, mass * mass * m.g.Gddot};
  } else {
    m.u = {1.0, 0.0};
  }
  m.v = {m.g.G, mass * m.g.Gdot};
  m.sigma = sigma;
  m.hbar = units.hbar;
  m.k = units.hbar * units.hbar / (4.0 * sigma * sigma);
  return m;
}

Sym2 full_matrix(const Model& m) {
  const double s2 = m.sigma * m.sigma;
  return {m.B.a11 + s2 * m.u[0] * m.u[0] + m.k * m.v[0] * m.v[0],
          m.B.a12 + s2 * m.u[0] * m.u[1] + m.k * m.v[0] * m.v[1],
          m.B.a22 + s2 * m.u[1] * m.u[1] + m.k * m.v[1] * m.v[1]};
}

// det(B + s w w^T) = det B + s (w~^T B w~), w~ = (w_Q, -w_P): no cancellation as t -> 0.
double det_plus_rank1(const Sym2& b, double s, const Vec2& w) {
  return b.det() + s * b.quad({w[1], -w[0]});
}

Sym2 plus_rank1(const Sym2& b, double s, const Vec2& w) {
  return {b.a11 + s * w[0] * w[0], b.a12 + s * w[0] * w[1], b.a22 + s * w[1] * w[1]};
}

double attenuation(const Model& m, CatKind kind, double shift) {
  const double s2 = m.sigma * m.sigma;
  if (kind == CatKind::position_cat) {
    const Sym2 c = plus_rank1(m.B, s2, m.u);
    const double num = det_plus_rank1(m.B, s2, m.u);
    const double den = num + m.k * c.quad({m.v[1], -m.v[0]});
    return shift * shift / (2.0 * s2) * num / den;
  }
  const Sym2 d = plus_rank1(m.B, m.k, m.v);
  const double num = det_plus_rank1(m.B, m.k, m.v);
  const double den = num + s2 * d.quad({m.u[1], -m.u[0]});
  return 2.0 * s2 * shift * shift / (m.hbar * m.hbar) * num / den;
}

// Initial characteristic function split into lobe and interference parts.
double initial_characteristic(CatKind kind, double sigma, double shift, double hbar, double Q, double P,
                              WignerTerms terms) {
  const double s2 = sigma * sigma;
  const double gp = std::exp(-s2 * P * P / (2.0 * hbar * hbar));
  const double gq = std::exp(-Q * Q / (8.0 * s2));
  double lobes = 0.0;
  double fringe = 0.0;
  double overlap = 0.0;
  if (kind == CatKind::position_cat) {
    overlap = std::exp(-shift * shift / (2.0 * s2));
    if (terms != WignerTerms::interference) lobes = std::cos(P * shift / hbar) * gp * gq;
    if (terms != WignerTerms::lobes) {
      const double a = Q - 2.0 * shift;
      const double b = Q + 2.0 * shift;
      fringe = 0.5 * gp * (std::exp(-a * a / (8.0 * s2)) + std::exp(-b * b / (8.0 * s2)));
    }
  } else {
    overlap = std::exp(-2.0 * s2 * shift * shift / (hbar * hbar));
    if (terms != WignerTerms::interference) lobes = std::cos(Q * shift / hbar) * gp * gq;
    if (terms != WignerTerms::lobes) {
      const double a = P - 2.0 * shift;
      const double b = P + 2.0 * shift;
      fringe = 0.5 * gq *
               (std::exp(-s2 * a * a / (2.0 * hbar * hbar)) + std::exp(-s2 * b * b / (2.0 * hbar * hbar)));
    }
  }
  return (lobes + fringe) / (1.0 + overlap);
}

double cat_shift(const CatSpec& s) { return s.kind == CatKind::position_cat ? s.x0 : s.p0; }

double evolved_value(const Model& m, CatKind kind, double shift, double Q, double P, WignerTerms terms) {
  const double hb = m.hbar;
  const Vec2 z{P, Q};
  const double damping = std::exp(-m.B.quad(z) / (2.0 * hb * hb));
  const double q_arg = m.v[0] * P + m.v[1] * Q;  // m Gdot Q + G P
  const double p_arg = m.u[0] * P + m.u[1] * Q;
  return damping * initial_characteristic(kind, m.sigma, shift, hb, q_arg, p_arg, terms);
}

// Lobe centre (q, p) at time t for the + branch.
Vec2 lobe_centre(const Model& m, CatKind kind, double shift) {
  if (kind == CatKind::position_cat) return {m.u[0] * shift, m.u[1] * shift};
  return {m.v[0] * shift, m.v[1] * shift};
}

// Peak of a sampled positive bump: quadratic least squares on log values over
// the 3x3 neighbourhood of the largest node (exact for Gaussians).
double refined_peak(const WignerField& f) {
  const auto& g = f.grid;
  std::size_t best = 0;
  for (std::size_t k = 1; k < f.values.size(); ++k) {
    if (f.values[k] > f.values[best]) best = k;
  }
  const std::size_t i0 = best / g.np();
  const std::size_t j0 = best % g.np();
  if (i0 == 0 || j0 == 0 || i0 + 1 >= g.nx() || j0 + 1 >= g.np()) return f.values[best];
  std::array<std::array<double, 6>, 6> ata{};
  std::array<double, 6> aty{};
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const double v = f.at(i0 + di, j0 + dj);
      if (v <= 0.0) return f.values[best];
      const std::array<double, 6> b{1.0, double(di), double(dj), double(di * di), double(di * dj), double(dj * dj)};
      for (int r = 0; r < 6; ++r) {
        aty[r] += b[r] * std::log(v);
        for (int c = 0; c < 6; ++c) ata[r][c] += b[r] * b[c];
      }
    }
  }
  for (int c = 0; c < 6; ++c) {
    int piv = c;
    for (int r = c + 1; r < 6; ++r) {
      if (std::abs(ata[r][c]) > std::abs(ata[piv][c])) piv = r;
    }
    std::swap(ata[c], ata[piv]);
    std::swap(aty[c], aty[piv]);
    for (int r = c + 1; r < 6; ++r) {
      const double fct = ata[r][c] / ata[c][c];
      for (int k = c; k < 6; ++k) ata[r][k] -= fct * ata[c][k];
      aty[r] -= fct * aty[c];
    }
  }
  std::array<double, 6> co{};
  for (int c = 5; c >= 0; --c) {
    double s = aty[c];
    for (int k = c + 1; k < 6; ++k) s -= ata[c][k] * co[k];
    co[c] = s / ata[c][c];
  }
  // Stationary point of c0 + c1 a + c2 b + c3 a^2 + c4 a b + c5 b^2.
  const double det = 4.0 * co[3] * co[5] - co[4] * co[4];
  if (!(co[3] < 0.0 && det > 0.0)) return f.values[best];
  const double a = (-2.0 * co[5] * co[1] + co[4] * co[2]) / det;
  const double b = (-2.0 * co[3] * co[2] + co[4] * co[1]) / det;
  if (std::abs(a) > 1.0 || std::abs(b) > 1.0) return f.values[best];
  return std::exp(co[0] + co[1] * a + co[2] * b + co[3] * a * a + co[4] * a * b + co[5] * b * b);
}

}  // namespace

void BathParams::validate() const {
  require(std::isfinite(m) && m > 0.0, ErrorCode::argument, "bath mass m must be positive");
  require(std::isfinite(gamma) && gamma > 0.0, ErrorCode::argument, "bath friction gamma must be positive");
  require(std::isfinite(T) && T > 0.0, ErrorCode::argument, "bath temperature T must be positive");
}

GreenFunction green_function(const BathParams& bath, double t) {
  bath.validate();
  require_time(t);
  const double e = std::exp(-bath.gamma * t);
  return {-std::expm1(-bath.gamma * t) / (bath.m * bath.gamma), e / bath.m, -bath.gamma * e / bath.m};
}

BathMoments bath_moments(const BathParams& bath, double t, const UnitSystem& units) {
  bath.validate();
  units.validate();
  require_time(t);
  const double kT = units.kB * bath.T;
  const double u = bath.gamma * t;
  double f = 0.0;
  if (u < 0.1) {
    // 2u - (1 - e^-u)(3 - e^-u) cancels to O(u^3); use its Taylor series.
    static constexpr std::array<double, 9> c{2.0 / 3.0,     -1.0 / 2.0,      7.0 / 30.0,
                                             -1.0 / 12.0,   31.0 / 1260.0,   -1.0 / 160.0,
                                             127.0 / 90720.0, -17.0 / 60480.0, 73.0 / 1425600.0};
    double power = u * u * u;
    for (double ck : c) {
      f += ck * power;
      power *= u;
    }
  } else {
    const double e = std::exp(-u);
    f = 2.0 * u - (1.0 - e) * (3.0 - e);
  }
  const double one_minus = -std::expm1(-u);
  BathMoments mom;
  mom.X2 = kT / (bath.m * bath.gamma * bath.gamma) * f;
  mom.XXdot = 2.0 * kT / (bath.m * bath.gamma) * one_minus * one_minus;
  mom.Xdot2 = kT / bath.m * -std::expm1(-2.0 * u);
  return mom;
}

ACoefficients a_coefficients(const BathParams& bath, double sigma, double t, const UnitSystem& units) {
  const Sym2 a = full_matrix(model(bath, sigma, t, units, Kinematics::derivative_flow));
  return {a.a11, a.a12, a.a22};
}

EvolutionCoefficients evolution_coefficients(const BathParams& bath, double sigma, double t,
                                             const UnitSystem& units) {
  EvolutionCoefficients c;
  c.t = t;
  c.green = green_function(bath, t);
  c.moments = bath_moments(bath, t, units);
  c.a = a_coefficients(bath, sigma, t, units);
  return c;
}

std::complex<double> evolve_characteristic(const CatSpec& state, const BathParams& bath, double t, double Q,
                                           double P, Kinematics kinematics, WignerTerms terms) {
  require_cat(state);
  const Model m = model(bath, state.sigma, t, state.units, kinematics);
  return {evolved_value(m, state.kind, cat_shift(state), Q, P, terms), 0.0};
}

EvolutionWindow default_evolution_window(const CatSpec& state, const BathParams& bath, double t,
                                         Kinematics kinematics) {
  require_cat(state);
  const Model m = model(bath, state.sigma, t, state.units, kinematics);
  const Sym2 a = full_matrix(m);
  const Vec2 c = lobe_centre(m, state.kind, cat_shift(state));
  return {std::abs(c[0]) + 9.0 * std::sqrt(a.a11), std::abs(c[1]) + 9.0 * std::sqrt(a.a22)};
}

WignerField evolved_wigner(const CatSpec& state, const BathParams& bath, double t,
                           const EvolutionGridOptions& options) {
  require_cat(state);
  require(options.n >= 8 && options.n % 4 == 0, ErrorCode::argument, "FFT size must be a multiple of 4 and >= 8");
  const Model m = model(bath, state.sigma, t, state.units, options.kinematics);
  const EvolutionWindow auto_window = default_evolution_window(state, bath, t, options.kinematics);
  const double q_half = options.q_half > 0.0 ? options.q_half : auto_window.q_half;
  const double p_half = options.p_half > 0.0 ? options.p_half : auto_window.p_half;

  const std::size_t n = options.n;
  const auto nd = static_cast<double>(n);
  const double hb = m.hbar;
  const double dq = 2.0 * q_half / nd;
  const double dp = 2.0 * p_half / nd;
  const double dP = 2.0 * std::numbers::pi * hb / (nd * dq);
  const double dQ = 2.0 * std::numbers::pi * hb / (nd * dp);
  const double shift = cat_shift(state);
  const long half = static_cast<long>(n / 2);

  Fft2d fft(n, n, Fft2d::Direction::backward);
  std::complex<double>* buf = fft.data();
  // Row k pairs P_k with q; column l pairs Q_l with p. (-1)^(k+l) centres the spectrum.
  parallel_for(n, [&](std::size_t k) {
    const double P = static_cast<double>(static_cast<long>(k) - half) * dP;
    for (std::size_t l = 0; l < n; ++l) {
      const double Q = static_cast<double>(static_cast<long>(l) - half) * dQ;
      const double sgn = ((k + l) % 2 == 0) ? 1.0 : -1.0;
      buf[k * n + l] = sgn * evolved_value(m, state.kind, shift, Q, P, options.terms);
    }
  });
  double edge = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    edge = std::max({edge, std::abs(buf[k * n]), std::abs(buf[k * n + n - 1]), std::abs(buf[k]),
                     std::abs(buf[(n - 1) * n + k])});
  }
  if (edge > 1e-12) {
    std::ostringstream os;
    os << "characteristic function is " << edge << " at the conjugate boundary; refine the position/momentum grid";
    fail(ErrorCode::window, os.str());
  }

  fft.execute();

  const Bounds b{-static_cast<double>(half) * dq, static_cast<double>(half - 1) * dq,
                 -static_cast<double>(half) * dp, static_cast<double>(half - 1) * dp};
  WignerField field(PhaseSpaceGrid(b, n, n));
  const double scale = dQ * dP / std::pow(2.0 * std::numbers::pi * hb, 2);
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t c = 0; c < n; ++c) {
      const double sgn = ((a + c) % 2 == 0) ? 1.0 : -1.0;
      field.at(a, c) = sgn * scale * buf[a * n + c].real();
    }
  });

  double peak = 0.0;
  for (double v : field.values) peak = std::max(peak, std::abs(v));
  double boundary = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    boundary = std::max({boundary, std::abs(field.at(0, k)), std::abs(field.at(n - 1, k)),
                         std::abs(field.at(k, 0)), std::abs(field.at(k, n - 1))});
  }
  if (boundary > 1e-6 * peak) {
    std::ostringstream os;
    os << "evolved Wigner function reaches " << boundary / peak << " of its peak at the window edge (aliasing)";
    fail(ErrorCode::window, os.str());
  }
  return field;
}

double attenuation_exponent(const CatSpec& state, const BathParams& bath, double t, Kinematics kinematics) {
  require_cat(state);
  return attenuation(model(bath, state.sigma, t, state.units, kinematics), state.kind, cat_shift(state));
}

double attenuation_exponent(const BathParams& bath, double sigma, double x0, double t, const UnitSystem& units,
                            Kinematics kinematics) {
  return attenuation(model(bath, sigma, t, units, kinematics), CatKind::position_cat, x0);
}

AttenuationCurve attenuation_curve(const CatSpec& state, const BathParams& bath, std::vector<double> times,
                                   Kinematics kinematics) {
  AttenuationCurve c;
  c.times = std::move(times);
  c.A0.resize(c.times.size());
  c.visibility.resize(c.times.size());
  parallel_for(c.times.size(), [&](std::size_t i) {
    c.A0[i] = attenuation_exponent(state, bath, c.times[i], kinematics);
    c.visibility[i] = std::exp(-c.A0[i]);
  });
  return c;
}

double central_visibility(const CatSpec& state, const BathParams& bath, double t,
                          const EvolutionGridOptions& options) {
  auto ratio = [&](double time) {
    EvolutionGridOptions o = options;
    // One window for both terms so the origin node is shared.
    const EvolutionWindow w = default_evolution_window(state, bath, time, options.kinematics);
    if (o.q_half <= 0.0) o.q_half = w.q_half;
    if (o.p_half <= 0.0) o.p_half = w.p_half;
    o.terms = WignerTerms::interference;
    const WignerField fringe = evolved_wigner(state, bath, time, o);
    o.terms = WignerTerms::lobes;
    const WignerField lobes = evolved_wigner(state, bath, time, o);
    const std::size_t c = o.n / 2;
    return fringe.at(c, c) / refined_peak(lobes);
  };
  return ratio(t) / ratio(0.0);
}

double attenuation_slope(const BathParams& bath, double x0, const UnitSystem& units) {
  bath.validate();
  return 4.0 * x0 * x0 * bath.m * units.kB * bath.T * bath.gamma / (units.hbar * units.hbar);
}

double decoherence_time_formula(CatKind kind, const BathParams& bath, double sigma, double shift,
                                const UnitSystem& units) {
  bath.validate();
  units.validate();
  require(shift != 0.0, ErrorCode::argument, "decoherence time needs a non-zero separation");
  const double kT = units.kB * bath.T;
  const double hb = units.hbar;
  if (kind == CatKind::position_cat) return hb * hb / (4.0 * bath.m * bath.gamma * kT * shift * shift);
  require(kind == CatKind::momentum_cat, ErrorCode::argument, "decoherence time needs a position or momentum cat");
  require(sigma > 0.0, ErrorCode::argument, "sigma must be positive");
  return std::pow(hb, 4) / (16.0 * bath.m * bath.gamma * kT * shift * shift * std::pow(sigma, 4));
}

DecoherenceTime decoherence_time(const CatSpec& state, const BathParams& bath, double threshold,
                                 Kinematics kinematics) {
  require_cat(state);
  require(threshold > 0.0, ErrorCode::argument, "threshold must be positive");
  DecoherenceTime out;
  out.kind = state.kind;
  out.threshold = threshold;
  out.tau_formula = decoherence_time_formula(state.kind, bath, state.sigma, cat_shift(state), state.units);

  auto excess = [&](double t) { return attenuation_exponent(state, bath, t, kinematics) - threshold; };
  double hi = out.tau_formula;
  double lo = 0.0;
  const double t_limit = 1e4 / bath.gamma + 1e4 * out.tau_formula;
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > t_limit) fail(ErrorCode::search, "attenuation exponent never reaches the threshold");
  }
  out.tau_crossing = detail::bisect_root(excess, lo, hi, excess(lo), 1e-14 * hi);

  const double t_small = 1e-4 * std::min(1.0 / bath.gamma, out.tau_formula);
  const double slope = attenuation_exponent(state, bath, t_small, kinematics) / t_small;
  out.tau_linear = slope > 0.0 ? threshold / slope : std::numeric_limits<double>::infinity();
  out.relative_error = (out.tau_crossing - out.tau_formula) / out.tau_formula;
  return out;
}

}  // namespace phasespace

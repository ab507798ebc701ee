#include "phasespace/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/errors.hpp"

namespace phasespace {

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  require(n >= 2, ErrorCode::argument, "trapezoid rule needs at least 2 samples");
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  require(n >= 2, ErrorCode::argument, "Simpson rule needs at least 2 samples");
  if (n == 2) return trapezoid_weights(n, h);
  std::vector<double> w(n, 0.0);
  // Panels of two intervals on [0, m]; an odd interval count ends with a 3/8 panel.
  const std::size_t intervals = n - 1;
  const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (simpson_end != intervals) {
    const std::size_t k = simpson_end;
    w[k] += 3.0 * h / 8.0;
    w[k + 1] += 9.0 * h / 8.0;
    w[k + 2] += 9.0 * h / 8.0;
    w[k + 3] += 3.0 * h / 8.0;
  }
  return w;
}

Rule1d gauss_hermite(std::size_t order) {
  require(order >= 16, ErrorCode::argument, "Gauss-Hermite order must be at least 16");
  const std::size_t n = order;
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  // Normalized Hermite functions h_n(z) and h_{n-1}(z); the exp(-z^2/2) factor keeps high orders finite.
  auto hermite = [&](double z) {
    double p1 = pim4 * std::exp(-0.5 * z * z);
    double p2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      const auto jd = static_cast<double>(j);
      p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
    }
    return std::pair{p1, p2};
  };
  const auto nd = static_cast<double>(n);
  // Roots lie below sqrt(2n+1); adjacent roots are at least ~pi/sqrt(2n+1) apart.
  const double zmax = std::sqrt(2.0 * nd + 1.0) + 1.0;
  const double step = 0.05 / std::sqrt(2.0 * nd + 1.0);
  std::vector<double> positive;
  double prev_z = (n % 2 == 1) ? step : 0.0;
  if (n % 2 == 1) positive.push_back(0.0);
  double prev_f = hermite(prev_z).first;
  for (double z = prev_z + step; z <= zmax && positive.size() < (n + 1) / 2; z += step) {
    const double f = hermite(z).first;
    if ((f < 0.0) != (prev_f < 0.0)) {
      double lo = prev_z;
      double hi = z;
      double flo = prev_f;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = hermite(mid).first;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      positive.push_back(0.5 * (lo + hi));
    }
    prev_z = z;
    prev_f = f;
  }
  require(positive.size() == (n + 1) / 2, ErrorCode::numeric, "Gauss-Hermite root search failed");
  Rule1d rule;
  rule.nodes.reserve(n);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (n % 2 == 1 && *it == 0.0) continue;
    rule.nodes.push_back(-*it);
  }
  for (double z : positive) rule.nodes.push_back(z);
  for (double z : rule.nodes) {
    const double pp = std::sqrt(2.0 * nd) * hermite(z).second;
    const double scaled = 2.0 / (pp * pp);
    rule.scaled_weights.push_back(scaled);
    rule.weights.push_back(scaled * std::exp(-z * z));
  }
  return rule;
}

double integrate_gauss_hermite(const std::function<double(double)>& f, double center, double scale,
                               std::size_t order) {
  require(scale > 0.0, ErrorCode::argument, "Gauss-Hermite scale must be positive");
  const Rule1d rule = gauss_hermite(order);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = rule.nodes[k];
    sum += rule.scaled_weights[k] * f(center + scale * t);
  }
  return scale * sum;
}

namespace {

std::vector<double> axis_weights(std::size_t n, double h, QuadratureRule rule) {
  switch (rule) {
    case QuadratureRule::trapezoid: return trapezoid_weights(n, h);
    case QuadratureRule::simpson: return simpson_weights(n, h);
    case QuadratureRule::gauss_hermite: break;
  }
  fail(ErrorCode::argument, "Gauss-Hermite requires scattered nodes; sample the integrand directly");
}

void require_finite(const WignerField& field) {
  require(field.values.size() == field.grid.size(), ErrorCode::invalid_field, "field size mismatch");
  require(field.all_finite(), ErrorCode::invalid_field, "field contains non-finite values");
}

}  // namespace

double integrate_2d(const WignerField& field, QuadratureRule rule) {
  require_finite(field);
  const auto& g = field.grid;
  const auto wx = axis_weights(g.nx(), g.dx(), rule);
  const auto wp = axis_weights(g.np(), g.dp(), rule);
  double total = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < g.np(); ++j) row += wp[j] * field.at(i, j);
    total += wx[i] * row;
  }
  return total;
}

double integrate_product(const WignerField& a, const WignerField& b, QuadratureRule rule) {
  require_finite(a);
  require_finite(b);
  require(a.grid.nx() == b.grid.nx() && a.grid.np() == b.grid.np(), ErrorCode::argument,
          "integrate_product requires matching node layouts");
  const auto& g = a.grid;
  const auto wx = axis_weights(g.nx(), g.dx(), rule);
  const auto wp = axis_weights(g.np(), g.dp(), rule);
  double total = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < g.np(); ++j) row += wp[j] * a.at(i, j) * b.at(i, j);
    total += wx[i] * row;
  }
  return total;
}

}  // namespace phasespace

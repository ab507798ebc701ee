#include "phasespace/kerr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

constexpr double kTailLimit = 1e-10;

void require_alpha(complex alpha) {
  require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()), ErrorCode::argument,
          "alpha must be finite");
}

// Coherent amplitudes for n = 0..cutoff and the discarded mass beyond cutoff.
std::vector<complex> coherent_amplitudes(complex alpha, std::size_t cutoff, double* tail) {
  std::vector<complex> c(cutoff + 1);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t n = 1; n <= cutoff; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  if (tail != nullptr) {
    double t = 0.0;
    complex cn = c[cutoff];
    // Terms past the Poisson peak decay geometrically; stop once negligible.
    for (std::size_t n = cutoff + 1; n < cutoff + 10000; ++n) {
      cn *= alpha / std::sqrt(static_cast<double>(n));
      const double w = std::norm(cn);
      t += w;
      if (static_cast<double>(n) > std::norm(alpha) && w < 1e-30 * std::max(t, 1e-300)) break;
      if (w == 0.0) break;
    }
    *tail = t;
  }
  return c;
}

}  // namespace

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const auto& c : amplitudes) s += std::norm(c);
  return s;
}

std::size_t min_cutoff(complex alpha) {
  const double a = std::abs(alpha);
  return static_cast<std::size_t>(std::ceil(a * a + 7.0 * a + 10.0));
}

FockVector coherent_state(complex alpha, std::size_t cutoff) {
  require_alpha(alpha);
  double tail = 0.0;
  FockVector v{coherent_amplitudes(alpha, cutoff, &tail)};
  require(tail <= kTailLimit, ErrorCode::truncation,
          "Fock cutoff " + std::to_string(cutoff) + " discards probability " + std::to_string(tail) +
              "; need at least " + std::to_string(min_cutoff(alpha)));
  return v;
}

FockVector kerr_evolve(complex alpha, double kappa_t, std::size_t cutoff) {
  require(std::isfinite(kappa_t), ErrorCode::argument, "kappa_t must be finite");
  FockVector v = coherent_state(alpha, cutoff);
  for (std::size_t n = 0; n <= cutoff; ++n) {
    const auto nd = static_cast<double>(n);
    // Reduce the phase modulo 2 pi in long double to keep n^2 exact for large n.
    const long double phase = std::fmod(-static_cast<long double>(kappa_t) * nd * nd / 2.0L,
                                        2.0L * std::numbers::pi_v<long double>);
    v.amplitudes[n] *= std::polar(1.0, static_cast<double>(phase));
  }
  return v;
}

complex fock_inner(const FockVector& a, const FockVector& b) {
  const std::size_t n = std::min(a.amplitudes.size(), b.amplitudes.size());
  complex s{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) s += std::conj(a.amplitudes[k]) * b.amplitudes[k];
  return s;
}

double fidelity(const FockVector& a, const FockVector& b) { return std::norm(fock_inner(a, b)); }

FockVector coherent_superposition(const std::vector<std::pair<complex, complex>>& weighted_alphas,
                                  std::size_t cutoff) {
  FockVector v{std::vector<complex>(cutoff + 1, complex{0.0, 0.0})};
  for (const auto& [weight, alpha] : weighted_alphas) {
    require_alpha(alpha);
    const auto c = coherent_amplitudes(alpha, cutoff, nullptr);
    for (std::size_t n = 0; n <= cutoff; ++n) v.amplitudes[n] += weight * c[n];
  }
  return v;
}

double husimi_q(const FockVector& state, complex beta) {
  const auto b = coherent_amplitudes(beta, state.cutoff(), nullptr);
  complex s{0.0, 0.0};
  for (std::size_t n = 0; n < b.size(); ++n) s += std::conj(b[n]) * state.amplitudes[n];
  return std::norm(s) / std::numbers::pi;
}

ComponentCount kerr_component_count(complex alpha, double kappa_t, std::size_t cutoff, std::size_t max_period) {
  require_alpha(alpha);
  require(std::isfinite(kappa_t), ErrorCode::argument, "kappa_t must be finite");
  auto phase_factor = [kappa_t](std::size_t n) {
    const auto nd = static_cast<long double>(n);
    const long double ph =
        std::fmod(-static_cast<long double>(kappa_t) * nd * nd / 2.0L, 2.0L * std::numbers::pi_v<long double>);
    return std::polar(1.0, static_cast<double>(ph));
  };

  ComponentCount out;
  const FockVector state = kerr_evolve(alpha, kappa_t, cutoff);
  const std::size_t check = std::max<std::size_t>(cutoff + 1, 4 * max_period);
  for (std::size_t s = 1; s <= max_period && out.period == 0; ++s) {
    bool periodic = true;
    for (std::size_t n = 0; n < check && periodic; ++n) {
      periodic = std::abs(phase_factor(n + s) - phase_factor(n)) < 1e-9;
    }
    if (periodic) out.period = s;
  }

  // Husimi Q on the ring |beta| = |alpha|; circular local maxima above 10% of the peak.
  constexpr std::size_t angles = 720;
  std::vector<double> q(angles);
  const double radius = std::abs(alpha);
  for (std::size_t k = 0; k < angles; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / angles;
    q[k] = husimi_q(state, std::polar(radius, theta));
  }
  const double q_max = *std::max_element(q.begin(), q.end());
  for (std::size_t k = 0; k < angles; ++k) {
    const double prev = q[(k + angles - 1) % angles];
    const double next = q[(k + 1) % angles];
    if (q[k] > prev && q[k] >= next && q[k] > 0.1 * q_max) ++out.husimi_peaks;
  }

  if (out.period == 0) {
    out.message = "no finite decomposition found";
    return out;
  }
  out.finite = true;
  const std::size_t s = out.period;
  out.weights.resize(s);
  for (std::size_t k = 0; k < s; ++k) {
    complex b{0.0, 0.0};
    for (std::size_t n = 0; n < s; ++n) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * n) % s) / static_cast<double>(s);
      b += phase_factor(n) * std::polar(1.0, angle);
    }
    out.weights[k] = b / static_cast<double>(s);
    if (std::abs(out.weights[k]) > 1e-8) ++out.dft_components;
  }
  out.message = std::to_string(out.dft_components) + " coherent components with period " + std::to_string(s);
  return out;
}

GaussianComponent coherent_to_gaussian(complex alpha, const QuadratureConvention& convention,
                                       const UnitSystem& units) {
  require_alpha(alpha);
  require(convention.sigma_ref > 0.0, ErrorCode::argument, "sigma_ref must be positive");
  const double s = convention.sigma_ref;
  GaussianComponent g;
  g.sigma = s;
  g.x0 = 2.0 * s * alpha.real();
  g.p0 = units.hbar * alpha.imag() / s;
  g.phase = -alpha.real() * alpha.imag();
  return g;
}

complex fock_wavefunction(const FockVector& state, const QuadratureConvention& convention, double x) {
  const double s = convention.sigma_ref;
  const double xi = x / (std::numbers::sqrt2 * s);
  double prev = 0.0;
  double cur = std::pow(2.0 * std::numbers::pi * s * s, -0.25) * std::exp(-0.5 * xi * xi);
  complex psi{0.0, 0.0};
  for (std::size_t n = 0; n < state.amplitudes.size(); ++n) {
    psi += state.amplitudes[n] * cur;
    const auto nd = static_cast<double>(n);
    const double next = std::sqrt(2.0 / (nd + 1.0)) * xi * cur - std::sqrt(nd / (nd + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return psi;
}

}  // namespace phasespace

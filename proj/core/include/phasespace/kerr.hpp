#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "phasespace/states.hpp"
#include "phasespace/units.hpp"

namespace phasespace {

/// Truncated photon-number amplitudes c_0..c_cutoff.
struct FockVector {
  std::vector<complex> amplitudes;

  std::size_t cutoff() const noexcept { return amplitudes.empty() ? 0 : amplitudes.size() - 1; }
  double norm_squared() const;
};

/// Identifies alpha with a Gaussian: x0 = 2 sigma_ref Re(alpha), p0 = (hbar/sigma_ref) Im(alpha).
struct QuadratureConvention {
  double sigma_ref = 1.0;
};

// ceil(|alpha|^2 + 7|alpha| + 10)
std::size_t min_cutoff(complex alpha);

// Coherent-state amplitudes; throws truncation if the discarded tail exceeds 1e-10.
FockVector coherent_state(complex alpha, std::size_t cutoff);

// exp(-i kappa_t (a^dag a)^2 / 2)|alpha>, i.e. c_n exp(-i kappa_t n^2 / 2).
FockVector kerr_evolve(complex alpha, double kappa_t, std::size_t cutoff);

complex fock_inner(const FockVector& a, const FockVector& b);
double fidelity(const FockVector& a, const FockVector& b);

// sum_k b_k |alpha_k> expanded in the Fock basis (no renormalization).
FockVector coherent_superposition(const std::vector<std::pair<complex, complex>>& weighted_alphas,
                                  std::size_t cutoff);

/// Decomposition of a Kerr-evolved coherent state into coherent components.
struct ComponentCount {
  bool finite = false;                // a periodic Kerr phase pattern was found
  std::size_t period = 0;             // s such that the phase pattern repeats every s levels
  std::vector<complex> weights;       // b_k multiplying |alpha e^{2 pi i k / s}>
  std::size_t dft_components = 0;     // number of |b_k| above threshold
  std::size_t husimi_peaks = 0;       // local maxima of Q on the |beta| = |alpha| ring
  std::string message;
};

// kappa_t should be commensurate with pi (e.g. pi/q); otherwise finite = false
// and message reports "no finite decomposition found".
ComponentCount kerr_component_count(complex alpha, double kappa_t, std::size_t cutoff,
                                    std::size_t max_period = 64);

// Q(beta) = |<beta|psi>|^2 / pi.
double husimi_q(const FockVector& state, complex beta);

GaussianComponent coherent_to_gaussian(complex alpha, const QuadratureConvention& convention,
                                       const UnitSystem& units = {});

// Position representation sum_n c_n phi_n(x) with oscillator eigenfunctions of width sigma_ref.
complex fock_wavefunction(const FockVector& state, const QuadratureConvention& convention, double x);

}  // namespace phasespace

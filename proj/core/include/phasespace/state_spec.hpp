#pragma once

#include <string>
#include <variant>

#include "phasespace/kerr.hpp"
#include "phasespace/states.hpp"

namespace phasespace {

/// Kerr-prepared state kept alongside its construction parameters.
struct FockState {
  complex alpha{0.0, 0.0};
  double kappa_t = 0.0;
  std::size_t cutoff = 0;
  QuadratureConvention convention;
  UnitSystem units;
  FockVector vector;
};

FockState make_fock_state(complex alpha, double kappa_t, std::size_t cutoff,
                          QuadratureConvention convention = {}, const UnitSystem& units = {});

using StateSpec = std::variant<CatSpec, MixedSpec, FockState>;

// {"type": "cat"|"mixed"|"compass"|"fock", ...}. Unknown keys are rejected.
//   cat:     {"axis": "position"|"momentum", "sigma", "x0"|"p0"}
//   mixed:   {"probability", "branches": [cat, cat]}
//   compass: {"sigma", "x0", "p0"}
//   fock:    {"alpha": [re, im], "kappa_t", "cutoff"?, "sigma_ref"?}
StateSpec state_from_json(const std::string& text, const UnitSystem& units = {});
std::string state_to_json(const StateSpec& state);

const UnitSystem& units_of(const StateSpec& state);
Bounds default_window(const StateSpec& state);

}  // namespace phasespace

#pragma once

namespace phasespace {

/// Physical scales shared by every evaluator. Defaults are dimensionless (hbar = kB = 1).
struct UnitSystem {
  double hbar = 1.0;
  double kB = 1.0;

  void validate() const;
};

}  // namespace phasespace

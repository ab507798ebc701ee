#include "phasespace/errors.hpp"

#include <cmath>

#include "phasespace/units.hpp"

namespace phasespace {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::argument: return "argument";
    case ErrorCode::invalid_field: return "invalid_field";
    case ErrorCode::coverage: return "coverage";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::window: return "window";
    case ErrorCode::truncation: return "truncation";
    case ErrorCode::search: return "search";
    case ErrorCode::config: return "config";
    case ErrorCode::numeric: return "numeric";
  }
  return "unknown";
}

void UnitSystem::validate() const {
  require(std::isfinite(hbar) && hbar > 0.0, ErrorCode::argument, "hbar must be positive");
  require(std::isfinite(kB) && kB > 0.0, ErrorCode::argument, "kB must be positive");
}

}  // namespace phasespace

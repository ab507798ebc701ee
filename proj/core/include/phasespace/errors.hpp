#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasespace {

enum class ErrorCode {
  argument,       // precondition on a scalar argument violated
  invalid_field,  // non-finite or malformed field data
  coverage,       // grid window does not cover the state support
  resolution,     // grid too coarse for the requested analysis
  window,         // FFT window aliasing or truncation
  truncation,     // Fock cutoff too small
  search,         // no minimum / root in the requested bracket
  config,         // malformed configuration document
  numeric,        // post-hoc numerical validation failed
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace phasespace

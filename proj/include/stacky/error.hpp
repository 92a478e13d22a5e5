#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stacky {

enum class ErrorCode {
  ResourceCap,        // sized input exceeded a configured budget
  CompositionNonzero, // d_out * d_in != 0
  NotChainCompatible, // an ambient map does not respect cycles/boundaries
  Validation,         // malformed group, cocycle, homomorphism, ...
  Tameness,           // characteristic divides a stabilizer order or r
  MissingH1,          // H^1 not derivable and not supplied
  Parse,              // syntax error in an input file
  Invariant,          // internal consistency check failed
  VerifyMismatch,     // oracle disagreement under --verify
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

} // namespace stacky

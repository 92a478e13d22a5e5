#include "stacky/error.hpp"

namespace stacky {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::ResourceCap: return "resource-cap";
  case ErrorCode::CompositionNonzero: return "composition-nonzero";
  case ErrorCode::NotChainCompatible: return "not-chain-compatible";
  case ErrorCode::Validation: return "validation";
  case ErrorCode::Tameness: return "tameness";
  case ErrorCode::MissingH1: return "missing-h1";
  case ErrorCode::Parse: return "parse";
  case ErrorCode::Invariant: return "invariant";
  case ErrorCode::VerifyMismatch: return "verify-mismatch";
  }
  return "unknown";
}

} // namespace stacky

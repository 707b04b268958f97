#include "mhls/error.hpp"

namespace mhls {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NonDecreasingChain: return "NonDecreasingChain";
    case ErrorCode::ProbabilityUnderflow: return "ProbabilityUnderflow";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::TreeMismatch: return "TreeMismatch";
    case ErrorCode::AtomNotFound: return "AtomNotFound";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::NotATransform: return "NotATransform";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace mhls

#include "cbo/error.hpp"

namespace cbo {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kInvalidConfig: return "invalid-config";
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kNumericDomain: return "numeric-domain";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kInfiniteRate: return "infinite-rate";
    case ErrorKind::kEmptyBall: return "empty-ball";
    case ErrorKind::kNonContractive: return "non-contractive";
    case ErrorKind::kInvalidAccuracy: return "invalid-accuracy";
    case ErrorKind::kUnsupportedInitialization: return "unsupported-initialization";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), index_(index) {}

bool Error::is_theory_precondition() const noexcept {
  switch (kind_) {
    case ErrorKind::kInfiniteRate:
    case ErrorKind::kEmptyBall:
    case ErrorKind::kNonContractive:
    case ErrorKind::kInvalidAccuracy:
    case ErrorKind::kUnsupportedInitialization:
      return true;
    default:
      return false;
  }
}

}  // namespace cbo

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cbo {

enum class ErrorKind {
  kInvalidDimension,
  kInvalidConfig,
  kInvalidInput,
  kNumericDomain,
  kDivergence,
  kInfiniteRate,
  kEmptyBall,
  kNonContractive,
  kInvalidAccuracy,
  kUnsupportedInitialization,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library. The kind drives CLI exit codes;
/// `index` carries the offending particle or step when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> index = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

  /// True for the kinds raised by closed-form bounds whose preconditions fail.
  bool is_theory_precondition() const noexcept;

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

}  // namespace cbo

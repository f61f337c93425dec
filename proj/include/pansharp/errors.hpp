#pragma once

#include <stdexcept>
#include <string>

namespace pansharp {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
  kUsage,      // bad arguments or preconditions (exit 1)
  kData,       // shape mismatch, file problems (exit 2)
  kNumerical,  // degenerate variance, rank deficiency, infeasibility (exit 3)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  /// Short machine-readable tag, e.g. "shape_mismatch".
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message)
      : Error(ErrorKind::kData, "shape_mismatch", message) {}
};

class RankDeficiencyError : public Error {
 public:
  explicit RankDeficiencyError(const std::string& message)
      : Error(ErrorKind::kNumerical, "rank_deficient", message) {}
};

class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& message)
      : Error(ErrorKind::kNumerical, "degenerate", message) {}
};

class CapExceededError : public Error {
 public:
  explicit CapExceededError(const std::string& message)
      : Error(ErrorKind::kUsage, "cap_exceeded", message) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error(ErrorKind::kUsage, "invalid_argument", message) {}
};

}  // namespace pansharp

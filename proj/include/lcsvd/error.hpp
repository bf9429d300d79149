#pragma once

#include <stdexcept>
#include <string>

namespace lcsvd {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorCode : int {
  validation = 2,
  io = 4,
  numerical = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorCode::validation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

/// Ill-conditioned or degenerate numerical input (zero matrix, singular Sigma, rank deficiency).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace lcsvd

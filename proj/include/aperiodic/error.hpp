#pragma once

#include <stdexcept>
#include <string>

namespace aperiodic {

enum class ErrorKind {
  kInvalidArgument,
  kOutOfWindow,
  kDegenerateInput,
  kDimensionMismatch,
  kSingularBasis,
  kMotifCollision,
  kNonPrimitive,
  kIllegalSeed,
  kUnknownLetter,
  kIllegalWord,
  kGenericity,
  kInsufficientRadius,
  kCapExceeded,
  kConfig,
  kShape,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace aperiodic

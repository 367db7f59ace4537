#pragma once

#include <stdexcept>
#include <string>

namespace famclass {

/// Broad failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidInput,      // malformed data, shape mismatch, bad manifest
  Hypothesis,        // a mathematical precondition does not hold
  NonStabilization,  // a numerical procedure failed to converge or stabilize
  Internal,          // cannot happen for valid data
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace famclass

#pragma once

#include <stdexcept>
#include <string>

namespace dtwin {

/// Failure categories. The CLI maps `usage`, `config` and `invalid_plan` to
/// exit code 2 and the numerical categories to exit code 3.
enum class ErrorKind {
  usage,
  config,
  invalid_state,
  invalid_input,
  invalid_plan,
  divergence,
  degenerate_reservoir,
  numerical,
  rank_deficiency,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a simulated or predicted state stops being finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time, double param)
      : Error(ErrorKind::divergence, what), time_(time), param_(param) {}

  double time() const noexcept { return time_; }
  double param() const noexcept { return param_; }

 private:
  double time_;
  double param_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dtwin

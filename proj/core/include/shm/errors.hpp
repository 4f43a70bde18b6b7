#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shm {

enum class ErrorCode {
  generator_mismatch,
  no_body,
  ring_mismatch,
  non_oriented_frame,
  singular_solve,
  shape_mismatch,
  aliasing_detected,
  generator_budget_exceeded,
  parity_mismatch,
  unknown_suite,
  config_parse,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this one exception type; the
// code identifies the condition, the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace shm

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xplain {

// Error categories shared by the library, the CLI (exit codes) and the HTTP
// service (status codes).
enum class ErrorCode {
  invalid_argument,
  not_found,
  method_unavailable,
  failed_precondition,
  rank_deficient,
  data_loss,
  internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace xplain

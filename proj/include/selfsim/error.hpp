#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selfsim {

enum class ErrorCode {
  DomainMismatch,
  LengthMismatch,
  InvalidPair,
  InvalidInput,
  Precondition,
  ZeroRow,
  SpecInvalid,
  NotGroupBundle,
  Degenerate,
  Overflow,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace selfsim

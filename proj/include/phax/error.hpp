#pragma once

#include <stdexcept>
#include <string>

namespace phax {

enum class ErrorCode {
  Parse,             // malformed or invalid theory source
  InvalidArgument,   // bad option value, unknown scheme, incomplete bindings...
  NotFound,          // unknown argument, target, session or critical question
  Insufficient,      // no explanation subtree meets the sufficiency threshold
  LimitExceeded,     // grounding, construction or enumeration cap hit
  Io,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phax

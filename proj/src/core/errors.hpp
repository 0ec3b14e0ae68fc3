#pragma once

#include <stdexcept>
#include <string>

namespace hbtsim {

/// Error categories; they map one-to-one onto the C API status codes.
enum class ErrorCode {
  invalid_config = 1,
  check_failed = 2,
  bad_argument = 3,
  runtime = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace hbtsim

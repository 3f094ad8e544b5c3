#pragma once

#include <stdexcept>
#include <string>

namespace ctxscen {

enum class ErrorCode {
  invalid_input,      // malformed or semantically invalid data
  cap_exceeded,       // a configured size cap would be exceeded
  not_composable,     // source/target mismatch
  unsupported,        // no procedure for the requested semiring/flavor
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorCode::invalid_input, what); }
[[noreturn]] inline void fail_cap(const std::string& what) { throw Error(ErrorCode::cap_exceeded, what); }
[[noreturn]] inline void fail_compose(const std::string& what) { throw Error(ErrorCode::not_composable, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

}  // namespace ctxscen

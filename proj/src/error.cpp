#include "ctxscen/error.hpp"

namespace ctxscen {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::not_composable: return "not_composable";
    case ErrorCode::unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace ctxscen

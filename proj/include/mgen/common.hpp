#pragma once

#include <stdexcept>
#include <string>

namespace mgen {

// Library-wide error type. Messages carry enough context (byte offsets,
// line numbers, parameter names) to act on without a debugger.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

}  // namespace mgen

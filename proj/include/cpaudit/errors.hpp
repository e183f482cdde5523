#pragma once

#include <stdexcept>
#include <string>

namespace cpaudit {

// Invalid inputs: malformed rows, broken invariants, bad flag combinations.
// The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem problems: missing or unreadable/unwritable files.
// The CLI maps this to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cpaudit

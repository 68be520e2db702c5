#pragma once

#include <stdexcept>
#include <string>

namespace vbifem {

/// Raised for malformed input, violated preconditions and solver failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Writes a warning line to standard error.
void warn(const std::string& message);

}  // namespace vbifem

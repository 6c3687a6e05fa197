#pragma once

#include <stdexcept>
#include <string>

namespace qtm {

/// Invalid user-supplied parameter or configuration. The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical identity that must hold by construction failed; signals a bug,
/// not bad input. The CLI maps this to exit code 3.
class invariant_violation : public std::runtime_error {
 public:
  explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qtm

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixid {

// Malformed parameters, mismatched dimensions, out-of-range states.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap would be exceeded. Never silently truncated.
class ResourceCap : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A conditional check was called with its hypothesis violated.
class HypothesisViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SizeCaps {
  std::size_t max_cells = std::size_t{1} << 20;  // M^L
  std::size_t max_work = std::size_t{1} << 24;   // K * M^L
  int max_poly_vars = 24;                        // dense 2^L coefficient maps
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

}  // namespace mixid

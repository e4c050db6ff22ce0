#pragma once

#include <stdexcept>
#include <string>

namespace exsieve {

/// Requested table or scan size exceeds the configured maximum.
struct limit_exceeded : std::length_error {
  using std::length_error::length_error;
};

/// Query point lies outside the range covered by a table.
struct out_of_range : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// A segment was requested that the base table cannot sieve.
struct insufficient_base : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct invalid_argument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace exsieve

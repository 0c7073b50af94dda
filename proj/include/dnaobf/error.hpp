#pragma once

#include <stdexcept>
#include <string>

namespace dnaobf {

// Bad user input: malformed files, invalid parameters, unaligned sequences.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural guarantee of the library was violated. Indicates a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantError(what);
}

}  // namespace dnaobf

#pragma once

#include <stdexcept>
#include <string>

namespace fintest {

// Malformed input: bad graph files, invalid parameters, inconsistent vectors.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive routine would exceed its configured guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input graph is not a member of the declared class C^c_d.
class NotInClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace fintest

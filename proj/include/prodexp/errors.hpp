#pragma once

#include <stdexcept>
#include <string>

namespace prodexp {

// Instance exceeds the enumeration budget of an exhaustive routine.
class LimitExceeded : public std::runtime_error {
 public:
  explicit LimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Bounded-distance decoding found no codeword within the guaranteed radius.
class DecodingFailure : public std::runtime_error {
 public:
  explicit DecodingFailure(const std::string& what) : std::runtime_error(what) {}
};

// A quantity is undefined for the instance (e.g. no word lies outside the code).
class Undefined : public std::domain_error {
 public:
  explicit Undefined(const std::string& what) : std::domain_error(what) {}
};

}  // namespace prodexp

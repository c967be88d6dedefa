#pragma once

#include <stdexcept>
#include <string>

namespace psec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relation input contains a directed cycle (or a self-loop).
class CycleError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds what an exhaustive routine supports.
class SizeError : public Error {
 public:
  using Error::Error;
};

class ParamError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

/// An exact enumerator was handed a rule that consumes private randomness.
class RandomRuleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace psec

// Exception types shared across the toolkit.
#pragma once

#include <stdexcept>
#include <string>

namespace orbitforge {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// (v,k,lambda) fails the symmetric-design identity or range checks.
class ParameterIdentityViolation : public Error {
 public:
  using Error::Error;
};

// Permutation degree does not match the structure it is applied to.
class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

// Orbit matrix handed to the indexer fails verification.
class InvalidOrbitMatrix : public Error {
 public:
  using Error::Error;
};

// The supplied action does not preserve the design (or has the wrong order).
class NotAnAutomorphism : public Error {
 public:
  using Error::Error;
};

// Two designs with different parameters were compared.
class ParamMismatch : public Error {
 public:
  using Error::Error;
};

// Parameters are not of the form (4t-1, 2t-1, t-1).
class NotHadamardParameters : public Error {
 public:
  using Error::Error;
};

// Point label outside the structure's point set.
class UnknownPoint : public Error {
 public:
  using Error::Error;
};

// Store has unfinished work units.
class StoreIncomplete : public Error {
 public:
  using Error::Error;
};

// Requested group order is outside what the engine supports.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

// Refusal to start a run whose estimated size exceeds the configured guard.
class ScaleGuard : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitforge

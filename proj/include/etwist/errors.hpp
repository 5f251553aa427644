#pragma once

#include <stdexcept>
#include <string>

namespace etwist {

// Base for every failure raised by the numerical modules. The CLI maps these
// to the "numeric error" exit status.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (e.g. alpha <= 0).
class DomainError : public Error {
public:
  using Error::Error;
};

// A denominator of a closed form vanished.
class SingularityError : public Error {
public:
  using Error::Error;
};

// Angular sampling too coarse for the requested OAM window.
class AliasingError : public Error {
public:
  using Error::Error;
};

// Radial/Cartesian sampling too coarse for the represented bandwidth.
class ResolutionError : public Error {
public:
  using Error::Error;
};

// Mode weights sum to zero, so no distribution can be formed.
class UndefinedDistributionError : public Error {
public:
  using Error::Error;
};

} // namespace etwist

#pragma once

#include <stdexcept>
#include <string>

namespace spr {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on the arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two distinct point pairs map to the same difference.
class CollisionError : public Error {
 public:
  using Error::Error;
};

// The input is numerically rank deficient or too ill-conditioned to solve.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// An output could not be formed from the data (e.g. too few peaks).
class DegenerateOutputError : public Error {
 public:
  using Error::Error;
};

// A value is outside the domain of the method (e.g. log of a nonpositive).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Measurements that contradict each other.
class InconsistentMeasurementError : public Error {
 public:
  using Error::Error;
};

// A difference could not be matched to any ACF atom within tolerance.
class LabelingError : public Error {
 public:
  using Error::Error;
};

}  // namespace spr

#pragma once

#include <stdexcept>
#include <string>

namespace qsegf {

/// Base class for every error raised by the library. Messages are prefixed
/// with the module that raised them, e.g. "integrals: ...".
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, bad arguments, unreadable files, inconsistent config.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical step failed (singular matrix, empty subspace, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsegf

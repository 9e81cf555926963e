#pragma once

#include <stdexcept>
#include <string>

namespace armafield {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on arguments or dimensions was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Numeric breakdown: unstable recursion or a singular system.
class NumericError : public Error {
public:
    using Error::Error;
};

class InstabilityError : public NumericError {
public:
    using NumericError::NumericError;
};

class EstimationFailure : public NumericError {
public:
    using NumericError::NumericError;
};

/// The data carries no usable second-order structure (e.g. constant input).
class DegenerateFieldError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public IoError {
public:
    using IoError::IoError;
};

}  // namespace armafield

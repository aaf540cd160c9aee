// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace rsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value: k out of range, non-finite vector entry, block out of bounds.
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A file or byte stream does not follow its format.
class FormatError : public Error {
public:
  using Error::Error;
};

/// An index violates one of its structural invariants.
class IndexError : public Error {
public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace rsr

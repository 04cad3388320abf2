#pragma once

#include <stdexcept>
#include <string>

namespace latentlens {

/// Base class for every error raised by the library. All of them are
/// "domain" errors from the point of view of the command-line tool (exit 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (out-of-range count, empty set, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Shapes or layouts of two operands disagree.
class LayoutMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (missing file, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

/// A fit had no information to work with (e.g. identical classes).
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

}  // namespace latentlens

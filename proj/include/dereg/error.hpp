#pragma once

#include <stdexcept>
#include <string>

namespace dereg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, used by the CLI error line.
  virtual const char* code() const noexcept { return "error"; }
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "invalid_argument"; }
};

/// Belief normalizer vanished: the evidence is impossible under the model.
class ZeroEvidenceError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "zero_evidence"; }
};

/// Gene identifiers of an expression matrix do not match the network.
class AlignmentError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "alignment"; }
};

/// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "format"; }
};

}  // namespace dereg

#pragma once

#include <stdexcept>
#include <string>

namespace temponet {

/// Base class for all temponet errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable streams and files.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Structurally broken input data (bad JSONL/CSV/TSV, too many malformed records).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a precondition (inverted window, uncovered node, oversized
/// brute-force instance, mismatched node sets).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The requested value is mathematically undefined for this input
/// (visit rates of an edgeless graph, clustering of an empty graph).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace temponet

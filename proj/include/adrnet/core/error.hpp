#pragma once

#include <stdexcept>
#include <string>

namespace adrnet {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

// A dataset drug without a descriptor row.
class CoverageError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Synthetic generator parameters that cannot be realised.
class SpecError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MetricUndefinedError : public Error {
 public:
  using Error::Error;
};

class DegenerateVarianceError : public Error {
 public:
  using Error::Error;
};

}  // namespace adrnet

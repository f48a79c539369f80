#pragma once

#include <stdexcept>
#include <string>

namespace tn {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidSupport : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class BlockSizeMismatch : public Error {
 public:
  using Error::Error;
};

class OverlappingSupports : public Error {
 public:
  using Error::Error;
};

// Raised when a factory cannot establish closure of the element set.
class ClosureError : public Error {
 public:
  using Error::Error;
};

class EmptyNode : public Error {
 public:
  using Error::Error;
};

class InvalidTemplate : public Error {
 public:
  using Error::Error;
};

class OrbitMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedTransform : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

// Config validation failure; `field` is a /-separated path into the config.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& reason)
      : Error(field + ": " + reason), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace tn

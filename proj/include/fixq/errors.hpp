#pragma once

#include <stdexcept>
#include <string>

namespace fixq {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Register too large/small, or mismatched dimensions.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Argument outside its documented domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sync intervals do not fit between the Hadamard instants.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Bad run configuration; key() names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace fixq

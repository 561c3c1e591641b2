#pragma once

#include <stdexcept>
#include <string>

namespace pqc {

/// Broad failure classes. The CLI maps each one to its own exit status.
enum class ErrorKind {
  usage,         // bad flags, missing inputs, inconsistent configuration
  data,          // malformed files, precondition violations on values
  backend,       // completion backend transport or replay fixture failures
  verification,  // oracle mismatch, failed checks
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(ErrorKind::backend, what) {}
};

class VerificationError : public Error {
 public:
  explicit VerificationError(const std::string& what) : Error(ErrorKind::verification, what) {}
};

/// Parse failure carrying the 1-based line (and optionally column name) it happened on.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pqc

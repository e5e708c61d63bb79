#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tripleid {

// Base for every error raised by the engine. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A violated precondition on data handed to the engine (e.g. a zero ID).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t offset, const std::string& what)
      : Error("line " + std::to_string(line) + ", byte " + std::to_string(offset) + ": " + what),
        line_(line),
        offset_(offset),
        message_(what) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t offset_;
  std::string message_;
};

// dictionary
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};
class UnknownId : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// store
class BadMagic : public FormatError {
 public:
  using FormatError::FormatError;
};
class BadVersion : public FormatError {
 public:
  using FormatError::FormatError;
};
class TruncatedFile : public FormatError {
 public:
  using FormatError::FormatError;
};

// kernel
class TooManySubqueries : public Error {
 public:
  using Error::Error;
};

// sparql
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error("query syntax error at offset " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};
class UnknownPrefix : public Error {
 public:
  using Error::Error;
};
class UnboundFilterVariable : public Error {
 public:
  using Error::Error;
};
class UnsupportedConstruct : public Error {
 public:
  explicit UnsupportedConstruct(const std::string& construct)
      : Error("unsupported construct: " + construct), construct_(construct) {}
  const std::string& construct() const noexcept { return construct_; }

 private:
  std::string construct_;
};

// query_ops
class DisconnectedPatterns : public Error {
 public:
  using Error::Error;
};
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace tripleid

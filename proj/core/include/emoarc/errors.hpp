#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emoarc {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: malformed files, failed preconditions on content.
class DataError : public Error {
 public:
  using Error::Error;
};

// A remote oracle or classifier misbehaved.
class BackendError : public Error {
 public:
  using Error::Error;
};

class MalformedRecord : public DataError {
 public:
  MalformedRecord(std::size_t line, const std::string& what)
      : DataError("malformed record at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyField : public DataError {
 public:
  using DataError::DataError;
};

class UnknownEmotion : public DataError {
 public:
  using DataError::DataError;
};

class IoFailure : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public DataError {
 public:
  DimensionMismatch(std::size_t line, std::size_t expected, std::size_t got)
      : DataError("dimension mismatch at line " + std::to_string(line) + ": expected " +
                  std::to_string(expected) + " components, got " + std::to_string(got)),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ProtagonistNotFound : public DataError {
 public:
  using DataError::DataError;
};

class TooShort : public DataError {
 public:
  using DataError::DataError;
};

class LengthMismatch : public DataError {
 public:
  using DataError::DataError;
};

class NonPositiveCount : public DataError {
 public:
  using DataError::DataError;
};

class TooSmallCorpus : public DataError {
 public:
  using DataError::DataError;
};

class OracleTimeout : public BackendError {
 public:
  using BackendError::BackendError;
};

class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

class Unavailable : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace emoarc

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace numerosity {

/// Broad failure classes. Each maps onto one CLI exit code.
enum class ErrorKind {
  io,                 // exit 1
  input_format,       // exit 2: parse, referential integrity, corrupt masks
  insufficient_data,  // exit 3
  configuration,      // exit 4
  domain,             // invalid argument values
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Malformed input text. `offset` is the byte position when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t offset = npos)
      : Error(ErrorKind::input_format, what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t offset_;
};

class ReferentialIntegrityError : public Error {
 public:
  explicit ReferentialIntegrityError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class DegenerateBoxError : public Error {
 public:
  explicit DegenerateBoxError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class CorruptMaskError : public Error {
 public:
  explicit CorruptMaskError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class ResponseInvalidError : public Error {
 public:
  explicit ResponseInvalidError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class EmptyResponseError : public Error {
 public:
  explicit EmptyResponseError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& what) : Error(ErrorKind::insufficient_data, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error(ErrorKind::configuration, what) {}
};

/// A scene that cannot produce magnitudes (empty object mask or no objects).
class DegenerateSceneError : public Error {
 public:
  explicit DegenerateSceneError(const std::string& what) : Error(ErrorKind::insufficient_data, what) {}
};

int exit_code_for(ErrorKind kind) noexcept;

}  // namespace numerosity

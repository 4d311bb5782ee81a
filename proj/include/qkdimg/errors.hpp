#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qkdimg {

/// Coarse error classes. The CLI prints the category name as the first
/// field of its machine-parsable error line.
enum class ErrorCategory {
  parameter,
  shape,
  key_length,
  divergence,
  cipher,
  session,
  insufficient_data,
  undefined_metric,
  format,
  path,
  dataset,
  io,
  usage,
  mismatch,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& message)
      : Error(ErrorCategory::parameter, message) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message)
      : Error(ErrorCategory::shape, message) {}
};

class KeyLengthError : public Error {
 public:
  explicit KeyLengthError(const std::string& message)
      : Error(ErrorCategory::key_length, message) {}
};

/// Orbit left the bounded region; `iteration()` is the 1-based step at
/// which |x| first exceeded the bound.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, std::size_t iteration)
      : Error(ErrorCategory::divergence, message), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class CipherError : public Error {
 public:
  CipherError(const std::string& message, std::string layer)
      : Error(ErrorCategory::cipher, message), layer_(std::move(layer)) {}

  const std::string& layer() const noexcept { return layer_; }

 private:
  std::string layer_;
};

class SessionError : public Error {
 public:
  explicit SessionError(const std::string& message)
      : Error(ErrorCategory::session, message) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& message)
      : Error(ErrorCategory::insufficient_data, message) {}
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& message)
      : Error(ErrorCategory::undefined_metric, message) {}
};

/// Malformed file content. `offset()` is the byte position where parsing
/// stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t offset)
      : Error(ErrorCategory::format, message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class PathError : public Error {
 public:
  explicit PathError(const std::string& message) : Error(ErrorCategory::path, message) {}
};

class DatasetError : public Error {
 public:
  explicit DatasetError(const std::string& message)
      : Error(ErrorCategory::dataset, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCategory::io, message) {}
};

/// Key or parameters do not match what a ciphertext was produced with.
class MismatchError : public Error {
 public:
  explicit MismatchError(const std::string& message)
      : Error(ErrorCategory::mismatch, message) {}
};

}  // namespace qkdimg

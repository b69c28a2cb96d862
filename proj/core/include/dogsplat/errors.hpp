#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dogsplat {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define DOGSPLAT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

DOGSPLAT_DEFINE_ERROR(InvalidExponent);
DOGSPLAT_DEFINE_ERROR(AllZeroScores);
DOGSPLAT_DEFINE_ERROR(RatioOutOfRange);
DOGSPLAT_DEFINE_ERROR(ProtocolViolation);
DOGSPLAT_DEFINE_ERROR(DimensionMismatch);
DOGSPLAT_DEFINE_ERROR(EmptyDataset);
DOGSPLAT_DEFINE_ERROR(UnsupportedFormat);
DOGSPLAT_DEFINE_ERROR(UnknownKey);
DOGSPLAT_DEFINE_ERROR(TypeError);
DOGSPLAT_DEFINE_ERROR(RangeError);
DOGSPLAT_DEFINE_ERROR(IoError);

#undef DOGSPLAT_DEFINE_ERROR

/// Malformed input. `location` is a byte offset for binary formats and a
/// 1-based line number for text formats; the message already names it.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t location)
      : Error("ParseError", message), location_(location) {}

  std::size_t location() const noexcept { return location_; }

 private:
  std::size_t location_;
};

/// Well-formed input that lacks required fields.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message) : Error("SchemaError", message) {}
};

}  // namespace dogsplat

#pragma once

#include <stdexcept>
#include <string>

namespace mvf {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input; carries the 1-based line number.
struct ParseError : Error {
  int line = 0;
  ParseError(const std::string& msg, int line_no)
      : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

struct DuplicateEntryError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct StructuralError : Error { using Error::Error; };
struct UnsupportedFaceError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct EmptyInputError : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct LookupError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };

}  // namespace mvf

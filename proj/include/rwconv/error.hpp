#pragma once

#include <stdexcept>
#include <string>

namespace rwconv {

enum class ErrorKind {
  Size,         // buffer length or operand dimensions disagree
  Shape,        // convolution geometry yields an empty output
  Arity,        // wrong number of interpolation points
  Construction, // transform set cannot be built (duplicate points, oversized tile)
  Unsupported,  // variant not available for this layer (e.g. stride != 1)
  Input,        // malformed user input (layer tables, CLI values)
  Io,
};

const char* error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rwconv

#pragma once

#include <stdexcept>
#include <string>

namespace cbloch {

// bad user input: unknown family, parameter out of range, malformed config
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// a computation left its contract: overflow, biorthonormality loss, pole hit
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cbloch

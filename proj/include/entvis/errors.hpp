#pragma once

#include <stdexcept>
#include <string>

namespace entvis {

// Bad user-supplied values: parameters, configs, operator preconditions.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Basis/shape mismatches: non-factorizable bases, wrong mode families.
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical results outside what roundoff can explain; signals a pipeline bug.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures while writing result artifacts.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace entvis

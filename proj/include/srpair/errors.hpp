#pragma once

#include <stdexcept>
#include <string>

namespace srpair {

// Error taxonomy shared by the library and the command line tool. The CLI
// maps these onto process exit codes: ValidationError -> 1, IoError -> 2,
// NumericalError -> 3. Anything else escaping main is a bug.

// Rejected inputs: parameter ranges, malformed configs, grid misuse.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem and parsing failures for files named by the user.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown the library could not recover from (failed solves,
// non-finite results, unusable decompositions).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace srpair

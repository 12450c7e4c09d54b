#ifndef PARLAB_ERRORS_HPP
#define PARLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parlab {

/// Invalid input: malformed chain, out-of-range region, bad grid.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed or produced a result outside its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested filling splits a degenerate shell, so the ground state is
/// not unique. Change the chain length or the particle number.
class DegenerateFermiLevel : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace parlab

#endif  // PARLAB_ERRORS_HPP

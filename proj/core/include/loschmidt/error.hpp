#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace loschmidt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a grid (or a length) do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A Fourier mode index cannot be represented on the grid.
class AliasingError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// The two Hamiltonians of a twin run do not belong to the same family.
class InvalidExperiment : public Error {
 public:
  using Error::Error;
};

/// The wave function vanishes somewhere, so the Madelung velocity is
/// undefined. The density is still available.
class DensityNodeError : public Error {
 public:
  DensityNodeError(std::size_t index, std::vector<double> density)
      : Error("wave function has a density node at grid index " +
              std::to_string(index)),
        index_(index),
        density_(std::move(density)) {}

  std::size_t index() const noexcept { return index_; }
  const std::vector<double>& density() const noexcept { return density_; }

 private:
  std::size_t index_;
  std::vector<double> density_;
};

/// Non-finite values or runaway density during time integration.
class BlowUpError : public Error {
 public:
  BlowUpError(long step, double max_density)
      : Error("numerical blow-up at step " + std::to_string(step) +
              " (max |psi|^2 = " + std::to_string(max_density) + ")"),
        step_(step),
        max_density_(max_density) {}

  long step() const noexcept { return step_; }
  double max_density() const noexcept { return max_density_; }

 private:
  long step_;
  double max_density_;
};

}  // namespace loschmidt

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  DimensionError(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected), actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

private:
  std::size_t expected_;
  std::size_t actual_;
};

class NotHermitianError : public Error {
public:
  explicit NotHermitianError(double deviation)
      : Error("matrix is not Hermitian (max |a - a^H| = " +
              std::to_string(deviation) + ")"),
        deviation_(deviation) {}

  double deviation() const noexcept { return deviation_; }

private:
  double deviation_;
};

/// Raised when an operator that must be positive has a negative direction.
/// The witness is a unit vector x with <x|a x> < 0.
class NotPositiveError : public Error {
public:
  NotPositiveError(double min_eigenvalue,
                   std::vector<std::complex<double>> witness)
      : Error("matrix is not positive semidefinite (min eigenvalue " +
              std::to_string(min_eigenvalue) + ")"),
        min_eigenvalue_(min_eigenvalue), witness_(std::move(witness)) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  const std::vector<std::complex<double>>& witness() const noexcept {
    return witness_;
  }

private:
  double min_eigenvalue_;
  std::vector<std::complex<double>> witness_;
};

class TraceError : public Error {
public:
  explicit TraceError(double trace)
      : Error("trace " + std::to_string(trace) + " exceeds 1"),
        trace_(trace) {}

  double trace() const noexcept { return trace_; }

private:
  double trace_;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// A chain handed to a supremum computation was not increasing.
class MonotonicityError : public Error {
public:
  MonotonicityError(std::size_t index, std::vector<std::complex<double>> witness)
      : Error("chain is not increasing at index " + std::to_string(index)),
        index_(index), witness_(std::move(witness)) {}

  /// Index of the first element that is not above its predecessor.
  std::size_t index() const noexcept { return index_; }
  const std::vector<std::complex<double>>& witness() const noexcept {
    return witness_;
  }

private:
  std::size_t index_;
  std::vector<std::complex<double>> witness_;
};

}  // namespace qrec

#pragma once

#include <stdexcept>
#include <string>

namespace multisym {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (bad axis label,
// dimension mismatch, nonpositive weight, nonpositive scale factor).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A p-vector on the zero section was passed where a nonzero one is required.
class ZeroSectionError : public Error {
 public:
  using Error::Error;
};

// Decomposability test requested for a degree without an implemented criterion.
class UnsupportedDegreeError : public Error {
 public:
  using Error::Error;
};

// y^{1...p} <= 0: the p-vector lies outside the graph chart.
class OrientationError : public Error {
 public:
  explicit OrientationError(const std::string& what, long cell = -1)
      : Error(what), cell_(cell) {}
  // Grid cell where the error was raised, -1 outside surface integration.
  long cell() const noexcept { return cell_; }

 private:
  long cell_;
};

// Inverse Legendre map did not reach the requested residual.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// Iteration collapsed toward the zero section or produced non-finite values.
class NumericalFailureError : public Error {
 public:
  using Error::Error;
};

// Wrong number of arguments passed to a form.
class ArityError : public Error {
 public:
  using Error::Error;
};

// A grid cell whose tangent p-vector vanishes.
class DegenerateCellError : public Error {
 public:
  DegenerateCellError(const std::string& what, long cell)
      : Error(what), cell_(cell) {}
  long cell() const noexcept { return cell_; }

 private:
  long cell_;
};

}  // namespace multisym

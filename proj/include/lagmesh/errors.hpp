#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lagmesh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The rounded lattice matrix M is singular; retry with a larger N.
class DegenerateLattice : public Error {
 public:
  using Error::Error;
};

/// Projection residual is still above tolerance after the iteration budget.
class MaxIterExceeded : public Error {
 public:
  using Error::Error;
};

/// The inner least-squares solve stagnated.
class LinearSolveFailure : public Error {
 public:
  using Error::Error;
};

/// A quadrilateral handed to the apex solver is not isotropic.
class NotIsotropic : public Error {
 public:
  NotIsotropic(const std::string& what, std::int64_t facet = -1)
      : Error(what), facet_(facet) {}
  std::int64_t facet() const { return facet_; }

 private:
  std::int64_t facet_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NonPositiveValue : public Error {
 public:
  using Error::Error;
};

}  // namespace lagmesh

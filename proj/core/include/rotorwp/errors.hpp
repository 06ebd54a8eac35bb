#ifndef ROTORWP_ERRORS_HPP
#define ROTORWP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rotorwp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mathematically invalid arguments (bad indices, arguments outside domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input values violating a documented invariant (bad parameters, unnormalized states).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Refused configuration: under-resolved grids, oversized requests.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent tabulated data (level schemes, spectra coverage).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Requested truncation tolerance not reachable; carries the achieved defect.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double achieved_defect)
      : Error(what), achieved_defect_(achieved_defect) {}
  double achieved_defect() const { return achieved_defect_; }

 private:
  double achieved_defect_;
};

/// Hard resource caps exceeded (expansion order, grid sizes).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// File I/O failures, reported with path context.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rotorwp

#endif  // ROTORWP_ERRORS_HPP

#pragma once

#include <stdexcept>
#include <string>

namespace floquet_sb {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Sampling or harmonic resolution too coarse for the requested quantity.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The Floquet construction was asked to proceed without the parity symmetry.
class ParityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Fock-space truncation discards more weight than allowed.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double weight)
      : std::runtime_error(what), weight_(weight) {}
  double weight() const noexcept { return weight_; }

 private:
  double weight_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace floquet_sb

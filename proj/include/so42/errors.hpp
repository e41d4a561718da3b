#pragma once

#include <stdexcept>
#include <string>

namespace so42 {

/// Evaluation point outside the admissible region of a classical realization.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A constraint system for derived ladder coefficients has no real solution.
class ConstraintError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A matrix failed its Hermitian / skew-Hermitian / unitary check.
class SymmetryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// No singular-value gap of the requested ratio separates signal from noise.
class RankAmbiguous : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace so42

#pragma once

#include <stdexcept>
#include <string>

namespace eigenvi {

/// Argument lies outside the support of a basis, density or proposal.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested basis order exceeds the configured maximum.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Basis or multi-index component out of range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NotImplementedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Score of a fitted density requested at a node of its expansion.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The importance-sampled estimator cannot be formed (zero proposal density,
/// too many rejected samples, non-finite matrix, ...).
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CdfBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace eigenvi

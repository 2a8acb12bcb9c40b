#pragma once

#include <stdexcept>
#include <string>

namespace cmzi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computed object failed an identity it must satisfy (e.g. POVM completeness).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Contextual values diverge: the detector outcomes carry no usable
/// which-path correlation (|V * Gamma| below threshold).
class AmbiguousMeasurement : public Error {
 public:
  AmbiguousMeasurement(double visibility, double gamma_param);
  double visibility() const noexcept { return visibility_; }
  double correlation() const noexcept { return correlation_; }

 private:
  double visibility_;
  double correlation_;
};

/// Conditioning on a drain whose marginal probability vanishes.
class PostSelectionImpossible : public Error {
 public:
  PostSelectionImpossible(std::string drain, double probability);
  const std::string& drain() const noexcept { return drain_; }
  double probability() const noexcept { return probability_; }

 private:
  std::string drain_;
  double probability_;
};

/// Configuration file or command-line schema violation.
class ConfigError : public Error {
 public:
  /// `where` is a field path ("detector.qpc1.T") or "line N".
  ConfigError(std::string where, const std::string& what);
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace cmzi

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace motr {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The evaluation budget is spent. The driver treats this as a normal stop.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Utopia and anti-utopia points coincide, so no projection plane exists.
class DegenerateRange : public Error {
 public:
  using Error::Error;
};

/// No poised sample set fits inside the (box-restricted) trust region.
class DegenerateRegion : public Error {
 public:
  using Error::Error;
};

class SingularInterpolation : public Error {
 public:
  using Error::Error;
};

/// The black-box evaluator misbehaved (bad output, crashed child, ...).
class EvaluatorFailure : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace motr

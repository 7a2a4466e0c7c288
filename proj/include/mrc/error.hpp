#pragma once

#include <stdexcept>
#include <string>

namespace mrc {

/// Base error carrying a module-qualified code such as "rankcorr.invalid_argument".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidArgument : public Error {
 public:
  InvalidArgument(const std::string& module, const std::string& message)
      : Error(module + ".invalid_argument", message) {}
};

class OptimizerFailure : public Error {
 public:
  explicit OptimizerFailure(const std::string& message)
      : Error("optimize.failure", message) {}
};

class InferenceUnreliable : public Error {
 public:
  explicit InferenceUnreliable(const std::string& message)
      : Error("inference.unreliable", message) {}
};

class SchemeInfeasible : public Error {
 public:
  explicit SchemeInfeasible(const std::string& message)
      : Error("sampling.scheme_infeasible", message) {}
};

class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& message)
      : Error("comparator.rank_deficient", message) {}
};

class InvalidWeight : public Error {
 public:
  explicit InvalidWeight(const std::string& message)
      : Error("comparator.invalid_weight", message) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message)
      : Error("datasets.schema", message) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& message)
      : Error("datasets.insufficient_data", message) {}
};

class ScenarioFailure : public Error {
 public:
  explicit ScenarioFailure(const std::string& message)
      : Error("harness.scenario_failure", message) {}
};

}  // namespace mrc

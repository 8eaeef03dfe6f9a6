#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cheb/funcalc.hpp"
#include "cheb/linalg.hpp"
#include "cheb/means.hpp"
#include "cheb/states.hpp"

namespace cheb {

/// Named values of one inequality instance. Suites produce these and the
/// spec-language evaluator consumes them, so both see identical operands.
struct Env {
  int dim = 0;
  std::map<std::string, std::vector<HermitianMatrix>> lists;
  std::map<std::string, HermitianMatrix> matrices;
  /// Non-Hermitian operands; only the expression evaluator reads these.
  std::map<std::string, Matrix> general_matrices;
  std::map<std::string, std::vector<double>> weights;
  std::map<std::string, double> scalars;
  std::map<std::string, ScalarFunction> functions;
  std::map<std::string, StateDescriptor> states;
  std::map<std::string, MeanDescriptor> means;

  const std::vector<HermitianMatrix> &list(const std::string &name) const;
  const HermitianMatrix &matrix(const std::string &name) const;
  const std::vector<double> &weight(const std::string &name) const;
  double scalar(const std::string &name) const;
  const ScalarFunction &function(const std::string &name) const;
  const StateDescriptor &state(const std::string &name) const;
  const MeanDescriptor &mean(const std::string &name) const;

  /// max(1, largest Frobenius norm among all bound matrices).
  double scale() const;
};

nlohmann::json to_json(const StateDescriptor &s);
nlohmann::json to_json(const Env &env);

} // namespace cheb

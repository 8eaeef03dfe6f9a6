#include "cheb/env.hpp"

#include <algorithm>

#include "cheb/json_io.hpp"

namespace cheb {

namespace {

template <class Map>
const typename Map::mapped_type &lookup(const Map &m, const std::string &name, const char *sort) {
  const auto it = m.find(name);
  if (it == m.end())
    throw Error(std::string("instance has no ") + sort + " named '" + name + "'");
  return it->second;
}

} // namespace

const std::vector<HermitianMatrix> &Env::list(const std::string &name) const {
  return lookup(lists, name, "matrix list");
}
const HermitianMatrix &Env::matrix(const std::string &name) const {
  return lookup(matrices, name, "matrix");
}
const std::vector<double> &Env::weight(const std::string &name) const {
  return lookup(weights, name, "weight list");
}
double Env::scalar(const std::string &name) const { return lookup(scalars, name, "scalar"); }
const ScalarFunction &Env::function(const std::string &name) const {
  return lookup(functions, name, "function");
}
const StateDescriptor &Env::state(const std::string &name) const {
  return lookup(states, name, "state");
}
const MeanDescriptor &Env::mean(const std::string &name) const {
  return lookup(means, name, "mean");
}

double Env::scale() const {
  double s = 1.0;
  for (const auto &[_, v] : lists)
    for (const auto &m : v)
      s = std::max(s, m.frobenius());
  for (const auto &[_, m] : matrices)
    s = std::max(s, m.frobenius());
  for (const auto &[_, m] : general_matrices)
    s = std::max(s, m.norm());
  return s;
}

nlohmann::json to_json(const StateDescriptor &s) {
  nlohmann::json j = {{"kind", s.name()}, {"dim", s.dim()}};
  if (s.kind() == StateDescriptor::Kind::vector_state) {
    std::vector<double> re, im;
    for (Eigen::Index i = 0; i < s.vector().size(); ++i) {
      re.push_back(s.vector()(i).real());
      im.push_back(s.vector()(i).imag());
    }
    j["x"] = {{"re", re}, {"im", im}};
  } else if (s.kind() == StateDescriptor::Kind::hadamard_trace) {
    j["c"] = matrix_to_json(s.filter());
  }
  return j;
}

nlohmann::json to_json(const Env &env) {
  nlohmann::json j;
  j["dim"] = env.dim;
  for (const auto &[k, v] : env.lists) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &m : v)
      arr.push_back(matrix_to_json(m));
    j["lists"][k] = std::move(arr);
  }
  for (const auto &[k, m] : env.matrices)
    j["matrices"][k] = matrix_to_json(m);
  for (const auto &[k, m] : env.general_matrices)
    j["general_matrices"][k] = matrix_to_json(m);
  for (const auto &[k, v] : env.weights)
    j["weights"][k] = v;
  for (const auto &[k, v] : env.scalars)
    j["scalars"][k] = v;
  for (const auto &[k, f] : env.functions)
    j["functions"][k] = f.name();
  for (const auto &[k, s] : env.states)
    j["states"][k] = to_json(s);
  for (const auto &[k, m] : env.means)
    j["means"][k] = m.name();
  return j;
}

} // namespace cheb

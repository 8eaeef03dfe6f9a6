#include <chrono>
#include <cmath>

#include "cheb/random.hpp"
#include "cheb/suites.hpp"
#include "speclang_internal.hpp"

namespace cheb::spec {

namespace {

constexpr int kMaxAttempts = 50;

void require_dims(const std::vector<int> &dims, std::size_t trials) {
  if (trials < 1)
    throw PreconditionError("check_spec: need at least one trial");
  if (dims.empty())
    throw PreconditionError("check_spec: empty dimension list");
  for (int d : dims)
    if (d < 1 || d > kMaxDim)
      throw DimensionMismatch("check_spec: dimension " + std::to_string(d) + " outside 1..16");
}

Env header_instance(const InequalitySpec &s, std::uint64_t seed, std::size_t trial, int dim) {
  Rng rng(derive_seed(seed, "spec", trial));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Env env = generate_from_header(s, rng, dim);
    try {
      verify_constraints(s, env);
      return env;
    } catch (const PreconditionError &) {
      // Draw again from the continuing stream.
    }
  }
  throw Error("check_spec: header constraints not met after " + std::to_string(kMaxAttempts) +
              " attempts (trial " + std::to_string(trial) + ")");
}

/// Names the spec reads must be bound with the declared sort.
void require_env_sorts(const InequalitySpec &s, const Env &env) {
  for (const auto &b : s.bindings) {
    bool ok = true;
    switch (b.sort) {
    case Sort::list: ok = env.lists.count(b.name) > 0; break;
    case Sort::matrix: ok = env.matrices.count(b.name) + env.general_matrices.count(b.name) > 0; break;
    case Sort::weights: ok = env.weights.count(b.name) > 0; break;
    case Sort::scalar: ok = env.scalars.count(b.name) > 0; break;
    case Sort::function: ok = env.functions.count(b.name) > 0; break;
    case Sort::state: ok = env.states.count(b.name) > 0; break;
    case Sort::mean: ok = env.means.count(b.name) > 0; break;
    }
    if (!ok)
      throw Error("generator/spec sort mismatch: the instance has no " + to_string(b.sort) + " named '" +
                  b.name + "'");
  }
}

} // namespace

CheckReport check_spec(const InequalitySpec &s, std::size_t trials, const std::vector<int> &dims,
                       std::uint64_t seed, const SpecSource &source) {
  require_dims(dims, trials);
  const auto start = std::chrono::steady_clock::now();
  CheckReport r;
  r.suite_id = source.suite_id ? "spec:" + *source.suite_id : "spec";
  r.trials = trials;
  r.dims = dims;
  r.seed = seed;
  r.form = "as written";
  r.config = {{"suite_id", r.suite_id},
              {"trials", trials},
              {"dims", dims},
              {"seed", seed},
              {"spec", format_spec(s)},
              {"source", source.suite_id ? *source.suite_id : "header"}};
  for (std::size_t t = 0; t < trials; ++t) {
    const int dim = dims[t % dims.size()];
    const Env env = source.suite_id ? generate_instance(*source.suite_id, seed, t, dim)
                                    : header_instance(s, seed, t, dim);
    require_env_sorts(s, env);
    const Margin m = spec_margin(s, env);
    const double normalized = m.value / env.scale();
    r.add_trial(t, env.dim, normalized, m.value,
                normalized < -r.tolerance ? to_json(env) : nlohmann::json());
  }
  r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SpecComparison compare_with_suite(const InequalitySpec &s, std::string_view suite_id,
                                  std::size_t trials, const std::vector<int> &dims,
                                  std::uint64_t seed) {
  require_dims(dims, trials);
  const CheckOptions opt{true, scored_form(suite_id)};
  SpecComparison c;
  c.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const Env env = generate_instance(suite_id, seed, t, dims[t % dims.size()]);
    require_env_sorts(s, env);
    const Margin native = suite_margin(suite_id, env, opt);
    const Margin ours = spec_margin(s, env);
    const double d = std::abs(ours.value - native.value) / std::max(1.0, native.magnitude);
    if (d > c.max_discrepancy || t == 0) {
      c.max_discrepancy = std::max(c.max_discrepancy, d);
      c.worst_trial = t;
    }
  }
  return c;
}

} // namespace cheb::spec

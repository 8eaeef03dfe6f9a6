#include "cheb/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "cheb/random.hpp"

namespace cheb {

namespace {

constexpr int kFieldGrid = 16;
constexpr int kMeanFieldGrid = 8;
constexpr int kMaxListLength = 5;
constexpr int kMaxAttempts = 50;

using Generator = std::function<Env(Rng &, int)>;
using Evaluator = std::function<Margin(const Env &, const CheckOptions &)>;

struct Suite {
  SuiteInfo info;
  Generator generate;
  Evaluator margin;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string fn(const char *head, double p) { return std::string(head) + ":" + fmt(p); }

std::vector<double> random_weights(Rng &rng, std::size_t k) {
  std::vector<double> w(k);
  for (auto &x : w)
    x = rng.uniform(0.1, 2.0);
  return w;
}

StateDescriptor random_state(Rng &rng, int n) {
  switch (rng.uniform_int(0, 2)) {
  case 0:
    return StateDescriptor::normalized_trace(n);
  case 1:
    return StateDescriptor::vector_state(random_unit_vector(rng, n));
  default:
    return StateDescriptor::hadamard_trace(random_psd(rng, n) + 0.05 * HermitianMatrix::identity(n));
  }
}

/// A_1 <= ... <= A_k by cumulative PSD increments, reversed for decreasing.
/// Zero increments (ties) occur on purpose.
std::vector<HermitianMatrix> random_chain(Rng &rng, int n, std::size_t k, Monotonicity dir,
                                          HermitianMatrix base) {
  std::vector<HermitianMatrix> out;
  out.reserve(k);
  out.push_back(std::move(base));
  for (std::size_t i = 1; i < k; ++i) {
    if (rng.coin(0.1)) {
      out.push_back(out.back());
      continue;
    }
    const double c = rng.uniform(0.0, 1.0);
    out.push_back(out.back() + c * random_psd(rng, n, rng.uniform_int(1, n)));
  }
  if (dir == Monotonicity::decreasing)
    std::reverse(out.begin(), out.end());
  return out;
}

std::size_t random_length(Rng &rng) {
  return static_cast<std::size_t>(rng.uniform_int(1, kMaxListLength));
}

const char *const kRamps[] = {"id", "pow:0.5", "pow:2", "exp:1", "harm", "frac"};
const char *const kWeights[] = {"const:1", "affine:1:0.5", "exp:1", "pow:2", "harm"};

template <std::size_t N> const char *pick(Rng &rng, const char *const (&xs)[N]) {
  return xs[rng.uniform_int(0, static_cast<int>(N) - 1)];
}

OperatorField random_field(Rng &rng, int n, int m, Monotonicity dir, const std::string &weight) {
  FieldRecipe r;
  r.kind = static_cast<FieldRecipe::Kind>(rng.uniform_int(0, 2));
  r.dim = n;
  r.m = m;
  r.seed = rng.engine()();
  r.ramp = pick(rng, kRamps);
  r.weight = weight;
  r.direction = dir;
  return make_field(r);
}

void put_field_layout(Env &env, const OperatorField &f) {
  env.weights["t"] = f.grid;
  env.weights["alpha"] = f.alpha;
  env.weights["mu"] = f.measures;
  env.weights["w"] = cell_weights(f);
}

OperatorField field_from_env(const Env &env, const std::string &name) {
  return {env.weight("t"), env.list(name), env.weight("alpha"), env.weight("mu")};
}

OperatorField discrete_from_env(const Env &env, const std::string &name) {
  return discrete_field(env.weight("w"), env.list(name));
}

struct FunctionPair {
  std::string f, g;
  enum class Operands { psd, pd, hermitian } operands;
};

HermitianMatrix operand(Rng &rng, int n, FunctionPair::Operands kind) {
  switch (kind) {
  case FunctionPair::Operands::psd:
    return random_psd(rng, n, rng.uniform_int(1, n));
  case FunctionPair::Operands::pd:
    return random_psd(rng, n) + rng.uniform(0.1, 1.0) * HermitianMatrix::identity(n);
  case FunctionPair::Operands::hermitian:
    return random_hermitian(rng, n);
  }
  return HermitianMatrix::zero(n);
}

/// Synchronous pairs with the operand class on which both are defined.
FunctionPair synchronous_pair(Rng &rng) {
  using O = FunctionPair::Operands;
  const double sgn = rng.coin() ? 1.0 : -1.0;
  switch (rng.uniform_int(0, 7)) {
  case 0:
    return {fn("pow", rng.uniform(0.1, 2.0)), fn("pow", rng.uniform(0.1, 2.0)), O::psd};
  case 1:
    return {fn("exp", sgn * rng.uniform(0.1, 1.5)), fn("exp", sgn * rng.uniform(0.1, 1.5)), O::hermitian};
  case 2:
    return {"id", fn("exp", rng.uniform(0.1, 1.5)), O::hermitian};
  case 3:
    return {"affine:" + fmt(sgn * rng.uniform(0.1, 2.0)) + ":" + fmt(rng.uniform(-1.0, 1.0)),
            "affine:" + fmt(sgn * rng.uniform(0.1, 2.0)) + ":" + fmt(rng.uniform(-1.0, 1.0)),
            O::hermitian};
  case 4:
    return {fn("min", rng.uniform(-1.0, 1.0)), "id", O::hermitian};
  case 5:
    return {"inv", fn("pow", -rng.uniform(0.1, 2.0)), O::pd};
  case 6:
    return {"log", fn("pow", rng.uniform(0.1, 2.0)), O::pd};
  default:
    return {"harm", "frac", O::psd};
  }
}

/// Synchronous pairs defined on the whole real line.
FunctionPair real_line_pair(Rng &rng) {
  using O = FunctionPair::Operands;
  const double sgn = rng.coin() ? 1.0 : -1.0;
  switch (rng.uniform_int(0, 5)) {
  case 0:
    return {"id", fn("exp", rng.uniform(0.1, 1.5)), O::hermitian};
  case 1:
    return {fn("exp", sgn * rng.uniform(0.1, 1.5)), fn("exp", sgn * rng.uniform(0.1, 1.5)), O::hermitian};
  case 2:
    return {"affine:" + fmt(sgn * rng.uniform(0.1, 2.0)) + ":" + fmt(rng.uniform(-1.0, 1.0)),
            "affine:" + fmt(sgn * rng.uniform(0.1, 2.0)) + ":" + fmt(rng.uniform(-1.0, 1.0)),
            O::hermitian};
  case 3:
    return {fn("min", rng.uniform(-1.0, 1.0)), "id", O::hermitian};
  case 4:
    return {fn("min", rng.uniform(-1.0, 1.0)), fn("exp", rng.uniform(0.1, 1.5)), O::hermitian};
  default:
    return {fn("const", rng.uniform(-1.0, 1.0)), fn("exp", sgn * rng.uniform(0.1, 1.5)), O::hermitian};
  }
}

/// Synchronous pairs, nonnegative on [0, inf).
FunctionPair nonnegative_pair(Rng &rng) {
  using O = FunctionPair::Operands;
  switch (rng.uniform_int(0, 5)) {
  case 0:
    return {fn("pow", rng.uniform(0.1, 2.0)), fn("pow", rng.uniform(0.1, 2.0)), O::psd};
  case 1:
    return {"harm", "frac", O::psd};
  case 2:
    return {"frac", fn("pow", rng.uniform(0.1, 2.0)), O::psd};
  case 3:
    return {fn("exp", rng.uniform(0.1, 1.0)), fn("pow", rng.uniform(0.1, 2.0)), O::psd};
  case 4:
    return {fn("exp", -rng.uniform(0.1, 2.0)), fn("exp", -rng.uniform(0.1, 2.0)), O::psd};
  default:
    return {fn("const", rng.uniform(0.0, 2.0)), fn("pow", rng.uniform(0.1, 2.0)), O::psd};
  }
}

void put_functions(Env &env, const FunctionPair &p) {
  env.functions.emplace("f", make_function(p.f));
  env.functions.emplace("g", make_function(p.g));
}

CheckOptions with_form(CheckOptions opt, Form f) {
  opt.form = f;
  return opt;
}

int index_of(const Env &env) {
  return static_cast<int>(std::lround(env.scalar("k")));
}

// Generators and evaluators, one pair per suite.

Env gen_thm2(Rng &rng, int n) {
  Env env;
  env.dim = n;
  const auto dir = rng.coin() ? Monotonicity::increasing : Monotonicity::decreasing;
  const std::string weight = pick(rng, kWeights);
  const auto fa = random_field(rng, n, kFieldGrid, dir, weight);
  const auto fb = random_field(rng, n, kFieldGrid, dir, weight);
  put_field_layout(env, fa);
  env.lists["A"] = fa.matrices;
  env.lists["B"] = fb.matrices;
  return env;
}

Margin eval_thm2(const Env &env, const CheckOptions &opt) {
  return margin_hadamard_chebyshev(field_from_env(env, "A"), field_from_env(env, "B"), opt);
}

Env gen_cor2(Rng &rng, int n) {
  Env env;
  env.dim = n;
  const std::size_t k = random_length(rng);
  env.weights["w"] = random_weights(rng, k);
  env.lists["A"] = random_chain(rng, n, k, Monotonicity::decreasing, random_hermitian(rng, n));
  env.lists["B"] = random_chain(rng, n, k, Monotonicity::decreasing, random_hermitian(rng, n));
  return env;
}

Margin eval_cor2(const Env &env, const CheckOptions &opt) {
  return margin_hadamard_chebyshev(discrete_from_env(env, "A"), discrete_from_env(env, "B"), opt);
}

Env gen_thm3_mean(Rng &rng, int n) {
  Env env;
  env.dim = n;
  const std::string weight = pick(rng, kWeights);
  for (const char *name : {"A", "B", "C", "D"}) {
    const auto f = random_field(rng, n, kMeanFieldGrid, Monotonicity::increasing, weight);
    if (env.weights.empty())
      put_field_layout(env, f);
    env.lists[name] = f.matrices;
  }
  const double mu = rng.coin(0.1) ? static_cast<double>(rng.uniform_int(0, 1)) : rng.uniform(0.0, 1.0);
  env.means.emplace("s", MeanDescriptor::geometric(mu));
  return env;
}

Margin eval_thm3_mean(const Env &env, const CheckOptions &opt) {
  return margin_mean_hadamard(field_from_env(env, "A"), field_from_env(env, "B"),
                              field_from_env(env, "C"), field_from_env(env, "D"), env.mean("s"), opt);
}

Env gen_thm3_geosplit(Rng &rng, int n) {
  Env env;
  env.dim = n;
  const std::string weight = pick(rng, kWeights);
  const auto fa = random_field(rng, n, kFieldGrid, Monotonicity::increasing, weight);
  const auto fb = random_field(rng, n, kFieldGrid, Monotonicity::increasing, weight);
  put_field_layout(env, fa);
  env.lists["A"] = fa.matrices;
  env.lists["B"] = fb.matrices;
  env.scalars["mu"] = rng.coin(0.1) ? static_cast<double>(rng.uniform_int(0, 1)) : rng.uniform(0.0, 1.0);
  return env;
}

Margin eval_thm3_geosplit(const Env &env, const CheckOptions &opt) {
  return margin_geo_split(field_from_env(env, "A"), field_from_env(env, "B"), env.scalar("mu"), opt);
}

Env gen_psd_chains(Rng &rng, int n, Monotonicity da, Monotonicity db, bool a_definite,
                   bool b_definite) {
  Env env;
  env.dim = n;
  const std::size_t k = random_length(rng);
  env.weights["w"] = random_weights(rng, k);
  auto base = [&](bool definite) {
    HermitianMatrix m = random_psd(rng, n, rng.uniform_int(1, n));
    if (definite)
      m += rng.uniform(0.1, 1.0) * HermitianMatrix::identity(n);
    return m;
  };
  HermitianMatrix base_a = base(a_definite);
  env.lists["A"] = random_chain(rng, n, k, da, std::move(base_a));
  env.lists["B"] = random_chain(rng, n, k, db, base(b_definite));
  return env;
}

Env gen_prop3_fmono(Rng &rng, int n) {
  // Definite chains: t^p with small p amplifies round-off eigenvalues of
  // singular operands (1e-16^0.05 is about 0.16).
  Env env = gen_psd_chains(rng, n, Monotonicity::decreasing, Monotonicity::decreasing, true, true);
  std::string f;
  switch (rng.uniform_int(0, 3)) {
  case 0:
    f = "pow:1";
    break;
  case 1:
    f = fn("const", rng.uniform(0.05, 1.0));
    break;
  default:
    f = fn("pow", rng.uniform(0.0, 1.0));
  }
  env.functions.emplace("f", make_function(f));
  return env;
}

Margin eval_prop3_fmono(const Env &env, const CheckOptions &opt) {
  return margin_monotone_fn(env.weight("w"), env.list("A"), env.list("B"), env.function("f"), opt);
}

Env gen_prop3_det(Rng &rng, int n) {
  return gen_psd_chains(rng, n, Monotonicity::decreasing, Monotonicity::decreasing, false, false);
}

Margin eval_prop3_det(const Env &env, const CheckOptions &opt) {
  return margin_det(env.weight("w"), env.list("A"), env.list("B"), opt);
}

Env gen_prop3_trace(Rng &rng, int n) {
  return gen_psd_chains(rng, n, Monotonicity::decreasing, Monotonicity::increasing, true, false);
}

Margin eval_prop3_trace(const Env &env, const CheckOptions &opt) {
  return margin_trace(env.weight("w"), env.list("A"), env.list("B"), opt);
}

Env gen_thm4_two_states(Rng &rng, int n) {
  Env env;
  env.dim = n;
  const auto p = synchronous_pair(rng);
  put_functions(env, p);
  env.matrices.emplace("A", operand(rng, n, p.operands));
  env.matrices.emplace("B", operand(rng, n, p.operands));
  env.states.emplace("t1", random_state(rng, n));
  env.states.emplace("t2", random_state(rng, n));
  return env;
}

Margin eval_thm4_two_states(const Env &env, const CheckOptions &opt) {
  return margin_two_states(env.state("t1"), env.state("t2"), env.function("f"), env.function("g"),
                           env.matrix("A"), env.matrix("B"), opt);
}

Env gen_thm4_decreasing(Rng &rng, int n) {
  Env env;
  env.dim = n;
  HermitianMatrix a = random_psd(rng, n) + rng.uniform(0.1, 1.0) * HermitianMatrix::identity(n);
  HermitianMatrix b = rng.coin(0.1) ? a : a + rng.uniform(0.0, 1.0) * random_psd(rng, n, rng.uniform_int(1, n));
  std::string f, g;
  switch (rng.uniform_int(0, 3)) {
  case 0:
    f = "inv";
    break;
  case 1:
    f = fn("pow", -rng.uniform(0.1, 2.0));
    break;
  case 2:
    f = fn("exp", -rng.uniform(0.1, 2.0));
    break;
  default:
    f = fn("const", rng.uniform(0.0, 2.0));
  }
  switch (rng.uniform_int(0, 3)) {
  case 0:
    g = "inv";
    break;
  case 1:
    g = fn("pow", -rng.uniform(0.1, 1.0));
    break;
  case 2:
    g = "affine:" + fmt(-rng.uniform(0.1, 2.0)) + ":" + fmt(rng.uniform(-1.0, 1.0));
    break;
  default:
    g = fn("const", rng.uniform(-1.0, 1.0));
  }
  env.functions.emplace("f", make_function(f));
  env.functions.emplace("g", make_function(g));
  env.matrices.emplace("A", std::move(a));
  env.matrices.emplace("B", std::move(b));
  env.states.emplace("t", random_state(rng, n));
  return env;
}

Margin eval_thm4_decreasing(const Env &env, const CheckOptions &opt) {
  return margin_decreasing_state(env.state("t"), env.function("f"), env.function("g"),
                                 env.matrix("A"), env.matrix("B"), opt);
}

Env gen_thm4_mixed(Rng &rng, int n) {
  Env env;
  env.dim = n;
  put_functions(env, real_line_pair(rng));
  env.matrices.emplace("A", random_hermitian(rng, n));
  env.matrices.emplace("B", random_hermitian(rng, n));
  env.states.emplace("t1", random_state(rng, n));
  env.states.emplace("t2", random_state(rng, n));
  return env;
}

Margin eval_thm4_mixed(const Env &env, const CheckOptions &opt) {
  return margin_mixed_state(env.state("t1"), env.state("t2"), env.function("f"), env.function("g"),
                            env.matrix("A"), env.matrix("B"), opt);
}

std::string bounded_function(Rng &rng) {
  switch (rng.uniform_int(0, 4)) {
  case 0:
    return "frac";
  case 1:
    return "harm";
  case 2:
    return fn("exp", -rng.uniform(0.1, 2.0));
  case 3:
    return fn("min", rng.uniform(0.1, 2.0));
  default:
    return fn("pow", rng.uniform(0.1, 2.0));
  }
}

Env gen_prop4_aczel(Rng &rng, int n) {
  Env env;
  env.dim = n;
  HermitianMatrix a = random_psd(rng, n, rng.uniform_int(1, n));
  HermitianMatrix b = random_psd(rng, n, rng.uniform_int(1, n));
  auto pts = hermitian_eigen(a).values;
  const auto pb = hermitian_eigen(b).values;
  pts.insert(pts.end(), pb.begin(), pb.end());
  const ScalarFunction f = make_function(bounded_function(rng));
  const ScalarFunction g = make_function(bounded_function(rng));
  // Smallest valid bound, sometimes loosened.
  auto bound = [&](const ScalarFunction &h) {
    double m = 0.0;
    for (double x : pts)
      m = std::max(m, h(x));
    return rng.coin(0.2) ? m : m * rng.uniform(1.0, 1.5);
  };
  env.scalars["a"] = bound(f);
  env.scalars["b"] = bound(g);
  env.functions.emplace("f", f);
  env.functions.emplace("g", g);
  env.matrices.emplace("A", std::move(a));
  env.matrices.emplace("B", std::move(b));
  env.states.emplace("t", random_state(rng, n));
  return env;
}

Margin eval_prop4_aczel(const Env &env, const CheckOptions &opt) {
  return margin_aczel(env.state("t"), env.function("f"), env.function("g"), env.scalar("a"),
                      env.scalar("b"), env.matrix("A"), env.matrix("B"), opt);
}

Env gen_lem5_eigsum(Rng &rng, int n) {
  Env env;
  env.dim = n;
  env.matrices.emplace("A", random_hermitian(rng, n));
  env.matrices.emplace("B", random_hermitian(rng, n));
  env.scalars["k"] = rng.uniform_int(1, n);
  return env;
}

Margin eval_lem5_eigsum(const Env &env, const CheckOptions &) {
  return margin_eigsum(env.matrix("A"), env.matrix("B"), index_of(env));
}

Env gen_thm5(Rng &rng, int n) {
  Env env;
  env.dim = n;
  const auto p = nonnegative_pair(rng);
  put_functions(env, p);
  env.matrices.emplace("A", operand(rng, n, p.operands));
  env.matrices.emplace("B", operand(rng, n, p.operands));
  env.scalars["k"] = rng.uniform_int(1, n);
  return env;
}

Margin eval_thm5_main(const Env &env, const CheckOptions &opt) {
  return margin_singular_main(env.function("f"), env.function("g"), env.matrix("A"),
                              env.matrix("B"), index_of(env), opt);
}

Margin eval_thm5_alt(const Env &env, const CheckOptions &opt) {
  return margin_singular_alt(env.function("f"), env.function("g"), env.matrix("A"),
                             env.matrix("B"), index_of(env), opt);
}

const std::vector<Suite> &suites() {
  static const std::vector<Suite> s = {
      {{"thm2_integral", "(int a)(int a A o B) >= (int a A) o (int a B), synchronous Hadamard fields", false},
       gen_thm2, eval_thm2},
      {{"cor2_discrete", "(sum w)(sum w A_j o B_j) >= (sum w A_j) o (sum w B_j), decreasing chains", false},
       gen_cor2, eval_cor2},
      {{"thm3_mean", "(int a)(int a (A o B) s (C o D)) >= (int a A s C) o (int a B s D)", false},
       gen_thm3_mean, eval_thm3_mean},
      {{"thm3_geosplit", "(int a)(int a A o B) >= (int a A #mu B) o (int a A #(1-mu) B)", false},
       gen_thm3_geosplit, eval_thm3_geosplit},
      {{"prop3_fmono", "(sum w)(sum w f(A_j o B_j)) >= (sum w f(A_j)) o (sum w f(B_j))", false},
       gen_prop3_fmono, eval_prop3_fmono},
      {{"prop3_det", "(sum w)^n det(sum w A_j o B_j) >= (sum w^n det A_j)(sum w^n det B_j)", false},
       gen_prop3_det, eval_prop3_det},
      {{"prop3_trace", "(sum w)(sum w tr(A_j^-1 B_j)) >= (sum w / tr A_j)(sum w tr B_j)", false},
       gen_prop3_trace, eval_prop3_trace},
      {{"thm4_two_states", "t1(f(A)g(A)) + t2(f(B)g(B)) >= t1(f(A))t2(g(B)) + t2(f(B))t1(g(A))", false},
       gen_thm4_two_states, eval_thm4_two_states},
      {{"thm4_decreasing", "t(f(A)g(A)) >= t(f(A))t(g(B)) for A <= B", true},
       gen_thm4_decreasing, eval_thm4_decreasing},
      {{"thm4_mixed", "t2(f(B)g(B)) + f(t1(A))g(t1(A)) >= f(t1(A))t2(g(B)) + t2(f(B))g(t1(A))", true},
       gen_thm4_mixed, eval_thm4_mixed},
      {{"prop4_aczel", "(ab - t(f(B)g(B))) >= (a - t(f(B)))(b - t(g(A)))", false},
       gen_prop4_aczel, eval_prop4_aczel},
      {{"lem5_eigsum", "l_k(A + B) >= l_n(A) + l_k(B)", false}, gen_lem5_eigsum, eval_lem5_eigsum},
      {{"thm5_singular_main", "s_k(f(A)g(A)) + s_k(f(B)g(B)) >= averaged s_n and s_k cross terms", true},
       gen_thm5, eval_thm5_main},
      {{"thm5_singular_alt", "f(s_k(A))g(s_k(A)) + s_k(f(B)g(B)) >= f(s_k(A))s_n(g(B)) + s_k(f(B))g(s_k(A))", false},
       gen_thm5, eval_thm5_alt},
  };
  return s;
}

const Suite &find_suite(std::string_view id) {
  for (const auto &s : suites())
    if (s.info.id == id)
      return s;
  throw UnknownName("unknown suite '" + std::string(id) + "'");
}

std::pair<Env, Margin> generate_verified(const Suite &s, std::uint64_t seed, std::size_t trial,
                                         int dim, Form form) {
  Rng rng(derive_seed(seed, s.info.id, trial));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Env env = s.generate(rng, dim);
    try {
      Margin m = s.margin(env, {true, form});
      return {std::move(env), m};
    } catch (const PreconditionError &) {
      // Regenerate from the continuing stream.
    }
  }
  throw Error("suite " + s.info.id + ": no admissible instance after " +
              std::to_string(kMaxAttempts) + " attempts (trial " + std::to_string(trial) + ")");
}

} // namespace

const std::vector<SuiteInfo> &suite_registry() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const auto &s : suites())
      v.push_back(s.info);
    return v;
  }();
  return infos;
}

const SuiteInfo &suite_info(std::string_view id) { return find_suite(id).info; }

Form scored_form(std::string_view id) {
  return find_suite(id).info.has_printed_variant ? Form::proved : Form::printed;
}

Env generate_instance(std::string_view id, std::uint64_t seed, std::size_t trial, int dim) {
  const Suite &s = find_suite(id);
  return generate_verified(s, seed, trial, dim, scored_form(id)).first;
}

Margin suite_margin(std::string_view id, const Env &env, const CheckOptions &opt) {
  return find_suite(id).margin(env, opt);
}

CheckReport run_suite(std::string_view id, std::size_t trials, const std::vector<int> &dims,
                      std::uint64_t seed, const RunOptions &opt) {
  const Suite &s = find_suite(id);
  if (trials < 1)
    throw PreconditionError("run_suite: need at least one trial");
  if (dims.empty())
    throw PreconditionError("run_suite: empty dimension list");
  for (int d : dims)
    if (d < 1 || d > kMaxDim)
      throw DimensionMismatch("run_suite: dimension " + std::to_string(d) + " outside 1..16");

  const auto start = std::chrono::steady_clock::now();
  const Form form = opt.form.value_or(scored_form(id));
  const bool count_printed = s.info.has_printed_variant && form != Form::printed;

  CheckReport r;
  r.suite_id = s.info.id;
  r.trials = trials;
  r.dims = dims;
  r.seed = seed;
  r.form = to_string(form);
  r.config = {{"suite_id", r.suite_id},
              {"trials", trials},
              {"dims", dims},
              {"seed", seed},
              {"form", r.form},
              {"check_hypotheses", opt.check_hypotheses},
              {"fixed_instance", opt.fixed_instance.has_value()}};
  if (count_printed) {
    r.printed_form_violations = 0;
    r.notes.push_back("scored on the proved form; printed_form_violations counts trials on which "
                      "the printed statement fails");
  }

  const CheckOptions eval_opt{opt.check_hypotheses, form};
  for (std::size_t t = 0; t < trials; ++t) {
    Env env;
    Margin m;
    if (opt.fixed_instance) {
      env = *opt.fixed_instance;
      m = s.margin(env, eval_opt);
    } else {
      const int dim = dims[t % dims.size()];
      auto [e, mm] = generate_verified(s, seed, t, dim, form);
      env = std::move(e);
      m = opt.check_hypotheses ? mm : s.margin(env, eval_opt);
    }
    const double scale = env.scale();
    const double normalized = m.value / scale;
    r.add_trial(t, env.dim, normalized, m.value,
                normalized < -r.tolerance ? to_json(env) : nlohmann::json());
    if (count_printed) {
      const Margin p = s.margin(env, with_form(eval_opt, Form::printed));
      if (p.value / scale < -r.tolerance)
        ++*r.printed_form_violations;
    }
  }
  r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Env necessity_counterexample() {
  Env env;
  env.dim = 2;
  env.functions.emplace("f", make_function("inv"));
  env.functions.emplace("g", make_function("inv"));
  env.matrices.emplace("A", HermitianMatrix::diagonal({2.0, 3.0}));
  env.matrices.emplace("B", HermitianMatrix::identity(2));
  env.states.emplace("t", StateDescriptor::normalized_trace(2));
  return env;
}

CounterexampleValues counterexample_values(double trace_normalization) {
  const Env env = necessity_counterexample();
  const auto &tau = env.state("t");
  const auto &a = env.matrix("A");
  const auto &b = env.matrix("B");
  const auto &f = env.function("f");
  // tau(X) = c tr(X) = (c n) * ntrace(X).
  const double c = trace_normalization * env.dim;
  const auto fa = apply_function(f, a);
  CounterexampleValues v;
  v.lhs = c * apply_state(tau, Matrix(fa.matrix() * fa.matrix()));
  v.rhs = c * apply_state(tau, fa) * (c * apply_state(tau, apply_function(f, b)));
  v.margin = margin_decreasing_state(tau, f, env.function("g"), a, b, {false, Form::printed}).value;
  return v;
}

double singular_equality_residual() {
  const std::pair<const char *, const char *> pairs[] = {
      {"pow:1", "pow:1"}, {"pow:0.5", "pow:2"}, {"harm", "frac"}, {"exp:0.7", "pow:1.5"}, {"const:2", "pow:3"}};
  double worst = 0.0;
  for (const auto &[fs, gs] : pairs) {
    const auto f = make_function(fs);
    const auto g = make_function(gs);
    for (int n = 1; n <= 6; ++n) {
      const auto id = HermitianMatrix::identity(n);
      for (int j = 1; j <= n; ++j)
        for (Form form : {Form::printed, Form::proved})
          worst = std::max(worst, std::abs(margin_singular_main(f, g, id, id, j, {true, form}).value));
    }
  }
  return worst;
}

} // namespace cheb

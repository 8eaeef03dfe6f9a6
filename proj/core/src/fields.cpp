#include "cheb/fields.hpp"

#include <algorithm>
#include <cmath>

#include "cheb/funcalc.hpp"
#include "cheb/json_io.hpp"
#include "cheb/random.hpp"

namespace cheb {

int OperatorField::dim() const {
  if (matrices.empty())
    throw PreconditionError("operator field has an empty grid");
  return matrices.front().dim();
}

void OperatorField::validate() const {
  if (matrices.empty())
    throw PreconditionError("operator field has an empty grid");
  const std::size_t m = matrices.size();
  if (grid.size() != m || alpha.size() != m || measures.size() != m)
    throw PreconditionError("operator field: grid, matrices, weights and measures differ in length");
  const int n = matrices.front().dim();
  for (std::size_t k = 0; k < m; ++k) {
    const auto idx = static_cast<std::ptrdiff_t>(k);
    if (matrices[k].dim() != n)
      throw PreconditionError("operator field: matrix dimension changes at index " + std::to_string(k), idx);
    if (!(alpha[k] >= 0.0) || !std::isfinite(alpha[k]))
      throw PreconditionError("operator field: negative weight at index " + std::to_string(k), idx);
    if (!(measures[k] > 0.0) || !std::isfinite(measures[k]))
      throw PreconditionError("operator field: non-positive cell measure at index " + std::to_string(k), idx);
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw PreconditionError("operator field: grid not ascending at index " + std::to_string(k), idx);
  }
}

OperatorField with_matrices(const OperatorField &f, std::vector<HermitianMatrix> matrices) {
  if (matrices.size() != f.size())
    throw PreconditionError("with_matrices: length mismatch");
  return {f.grid, std::move(matrices), f.alpha, f.measures};
}

OperatorField discrete_field(std::vector<double> weights, std::vector<HermitianMatrix> matrices) {
  OperatorField f;
  f.grid.resize(matrices.size());
  for (std::size_t k = 0; k < matrices.size(); ++k)
    f.grid[k] = static_cast<double>(k + 1);
  f.matrices = std::move(matrices);
  f.alpha = std::move(weights);
  f.measures.assign(f.matrices.size(), 1.0);
  f.validate();
  return f;
}

std::vector<double> cell_weights(const OperatorField &f) {
  std::vector<double> w(f.alpha.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = f.alpha[k] * f.measures[k];
  return w;
}

double total_weight(const OperatorField &f) {
  double s = 0.0;
  for (double w : cell_weights(f))
    s += w;
  return s;
}

HermitianMatrix integrate(const OperatorField &f) {
  if (f.matrices.empty())
    throw PreconditionError("integrate: empty grid");
  const auto w = cell_weights(f);
  HermitianMatrix acc = HermitianMatrix::zero(f.dim());
  for (std::size_t k = 0; k < f.size(); ++k)
    acc += w[k] * f.matrices[k];
  return acc;
}

double field_scale(const OperatorField &f) {
  double s = 1.0;
  for (const auto &a : f.matrices)
    s = std::max(s, a.frobenius());
  return s;
}

void require_same_layout(const OperatorField &a, const OperatorField &b) {
  if (a.grid != b.grid)
    throw PreconditionError("operator fields: grid mismatch");
  if (a.alpha != b.alpha || a.measures != b.measures)
    throw PreconditionError("operator fields: weight or measure mismatch");
  if (a.dim() != b.dim())
    throw DimensionMismatch("operator fields: dimension mismatch");
}

std::optional<std::size_t> find_order_violation(const OperatorField &f, Monotonicity m, double tol) {
  if (m == Monotonicity::none)
    return std::nullopt;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const auto &lo = m == Monotonicity::increasing ? f.matrices[k] : f.matrices[k + 1];
    const auto &hi = m == Monotonicity::increasing ? f.matrices[k + 1] : f.matrices[k];
    if (!loewner_geq(hi, lo, tol).holds)
      return k + 1;
  }
  return std::nullopt;
}

std::optional<SyncWitness> check_sync_hadamard(const OperatorField &fa, const OperatorField &fb,
                                               double tol) {
  if (fa.grid != fb.grid)
    throw PreconditionError("check_sync_hadamard: grid mismatch");
  require_same_dim(fa.dim(), fb.dim(), "check_sync_hadamard");
  for (std::size_t s = 0; s < fa.size(); ++s)
    for (std::size_t t = s + 1; t < fa.size(); ++t) {
      const auto prod = hadamard(fa.matrices[t] - fa.matrices[s], fb.matrices[t] - fb.matrices[s]);
      const double lmin = lambda_min(prod);
      if (lmin < -tol)
        return SyncWitness{s, t, -lmin};
    }
  return std::nullopt;
}

namespace {

std::vector<HermitianMatrix> affine_samples(const FieldRecipe &r, Rng &rng,
                                            const std::vector<double> &grid) {
  const ScalarFunction ramp = make_function(r.ramp);
  if (ramp.flags().monotone_increasing != Tri::declared_true)
    throw PreconditionError("affine field: ramp '" + r.ramp + "' is not declared increasing");
  const HermitianMatrix p0 = r.p0 ? *r.p0 : random_psd(rng, r.dim);
  const HermitianMatrix p1 = r.p1 ? *r.p1 : random_psd(rng, r.dim);
  require_same_dim(p0.dim(), r.dim, "affine field P0");
  require_same_dim(p1.dim(), r.dim, "affine field P1");
  std::vector<HermitianMatrix> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = r.direction == Monotonicity::decreasing ? 1.0 - grid[k] : grid[k];
    const double c = ramp(t);
    if (c < 0.0)
      throw PreconditionError("affine field: ramp is negative at index " + std::to_string(k),
                              static_cast<std::ptrdiff_t>(k));
    out.push_back(p0 + c * p1);
  }
  return out;
}

std::vector<HermitianMatrix> power_samples(const FieldRecipe &r, Rng &rng,
                                           const std::vector<double> &grid) {
  // Q >= I makes t -> Q^t increasing (commuting family, log Q >= 0).
  const HermitianMatrix q = HermitianMatrix::identity(r.dim) + rng.uniform(0.2, 2.0) * random_psd(rng, r.dim);
  const EigenSystem es = hermitian_eigen(q);
  std::vector<HermitianMatrix> out;
  out.reserve(grid.size());
  std::vector<double> vals(es.values.size());
  for (double g : grid) {
    const double t = r.direction == Monotonicity::decreasing ? 1.0 - g : g;
    for (std::size_t i = 0; i < vals.size(); ++i)
      vals[i] = std::pow(std::max(es.values[i], 1.0), t);
    out.push_back(spectral_compose(es.vectors, vals));
  }
  return out;
}

std::vector<HermitianMatrix> custom_samples(const FieldRecipe &r, Rng &rng, std::size_t m) {
  std::vector<HermitianMatrix> out;
  out.reserve(m);
  out.push_back(random_psd(rng, r.dim));
  for (std::size_t k = 1; k < m; ++k) {
    const int rank = rng.uniform_int(1, r.dim);
    const double c = rng.uniform(0.0, 2.0) / static_cast<double>(m);
    out.push_back(out.back() + c * random_psd(rng, r.dim, rank));
  }
  if (r.direction == Monotonicity::decreasing)
    std::reverse(out.begin(), out.end());
  return out;
}

} // namespace

OperatorField make_field(const FieldRecipe &r) {
  if (r.dim < 1 || r.dim > kMaxDim)
    throw DimensionMismatch("make_field: dimension outside supported range");
  if (r.m < 1)
    throw PreconditionError("make_field: grid size must be positive");
  Rng rng(r.seed);
  OperatorField f;
  const auto m = static_cast<std::size_t>(r.m);
  f.grid.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    f.grid[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
  f.measures.assign(m, 1.0 / static_cast<double>(m));

  switch (r.kind) {
  case FieldRecipe::Kind::affine_increasing:
    f.matrices = affine_samples(r, rng, f.grid);
    break;
  case FieldRecipe::Kind::power_family:
    f.matrices = power_samples(r, rng, f.grid);
    break;
  case FieldRecipe::Kind::custom_sampled:
    f.matrices = custom_samples(r, rng, m);
    break;
  }

  const ScalarFunction w = make_function(r.weight);
  f.alpha.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    f.alpha[k] = w(f.grid[k]);
    if (f.alpha[k] < 0.0)
      throw PreconditionError("make_field: weight is negative at index " + std::to_string(k),
                              static_cast<std::ptrdiff_t>(k));
  }
  f.validate();

  const double tol = 1e-10 * field_scale(f);
  if (const auto bad = find_order_violation(f, r.direction, tol))
    throw PreconditionError("make_field: declared order fails at index " + std::to_string(*bad),
                            static_cast<std::ptrdiff_t>(*bad));
  return f;
}

std::string to_string(FieldRecipe::Kind k) {
  switch (k) {
  case FieldRecipe::Kind::affine_increasing:
    return "affine_increasing";
  case FieldRecipe::Kind::power_family:
    return "power_family";
  case FieldRecipe::Kind::custom_sampled:
    return "custom_sampled";
  }
  return "?";
}

FieldRecipe field_recipe_from_json(const nlohmann::json &j) {
  FieldRecipe r;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "affine_increasing")
      r.kind = FieldRecipe::Kind::affine_increasing;
    else if (kind == "power_family")
      r.kind = FieldRecipe::Kind::power_family;
    else if (kind == "custom_sampled")
      r.kind = FieldRecipe::Kind::custom_sampled;
    else
      throw UnknownName("unknown field kind '" + kind + "'");
    r.dim = j.at("dim").get<int>();
    r.m = j.value("m", 64);
    r.seed = j.value("seed", std::uint64_t{0});
    r.ramp = j.value("ramp", std::string("id"));
    r.weight = j.value("weight", std::string("const:1"));
    const std::string dir = j.value("direction", std::string("increasing"));
    if (dir == "increasing")
      r.direction = Monotonicity::increasing;
    else if (dir == "decreasing")
      r.direction = Monotonicity::decreasing;
    else if (dir == "none")
      r.direction = Monotonicity::none;
    else
      throw UnknownName("unknown field direction '" + dir + "'");
    if (j.contains("p0"))
      r.p0 = hermitian_from_json(j["p0"]);
    if (j.contains("p1"))
      r.p1 = hermitian_from_json(j["p1"]);
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("field recipe: ") + e.what());
  }
  return r;
}

nlohmann::json to_json(const FieldRecipe &r) {
  nlohmann::json j = {{"kind", to_string(r.kind)}, {"dim", r.dim},   {"m", r.m},
                      {"seed", r.seed},            {"ramp", r.ramp}, {"weight", r.weight}};
  j["direction"] = r.direction == Monotonicity::increasing   ? "increasing"
                   : r.direction == Monotonicity::decreasing ? "decreasing"
                                                             : "none";
  if (r.p0)
    j["p0"] = matrix_to_json(*r.p0);
  if (r.p1)
    j["p1"] = matrix_to_json(*r.p1);
  return j;
}

} // namespace cheb

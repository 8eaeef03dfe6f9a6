#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cheb/linalg.hpp"

namespace cheb {

enum class Monotonicity { none, increasing, decreasing };

/// Sampled operator field t -> A_t on an ascending grid.
///
/// Each sample carries a weight alpha(t_k) >= 0 and the measure mu(E_k) > 0
/// of its partition cell. The discrete case T = {1..n} is the field with
/// grid 1..n and unit cell measures.
struct OperatorField {
  std::vector<double> grid;
  std::vector<HermitianMatrix> matrices;
  std::vector<double> alpha;
  std::vector<double> measures;

  std::size_t size() const noexcept { return matrices.size(); }
  int dim() const;
  /// Throws PreconditionError (with the offending index) on inconsistent
  /// sizes, a non-ascending grid, negative weights or non-positive cells.
  void validate() const;
};

/// Same grid, weights and measures with the matrices replaced.
OperatorField with_matrices(const OperatorField &f, std::vector<HermitianMatrix> matrices);

/// Discrete field on {1..n} with alpha = weights and unit measures.
OperatorField discrete_field(std::vector<double> weights, std::vector<HermitianMatrix> matrices);

/// Per-cell weights alpha(t_k) * mu(E_k), the only form in which the
/// measure enters any sum.
std::vector<double> cell_weights(const OperatorField &f);

/// Sum of cell weights, i.e. the integral of alpha.
double total_weight(const OperatorField &f);

/// Riemann sum of alpha * A over the partition. Throws on an empty grid.
HermitianMatrix integrate(const OperatorField &f);

/// Largest Frobenius norm of any sample, floored at 1.
double field_scale(const OperatorField &f);

/// Throws PreconditionError unless both fields share grid, weights and
/// measures.
void require_same_layout(const OperatorField &a, const OperatorField &b);

/// First index k with A_{k+1} violating the declared order against A_k at
/// tolerance tol, or nullopt.
std::optional<std::size_t> find_order_violation(const OperatorField &f, Monotonicity m, double tol);

struct SyncWitness {
  std::size_t s = 0;
  std::size_t t = 0;
  double violation = 0.0; ///< -lambda_min of the Hadamard product
};

/// Checks lambda_min((A_t - A_s) o (B_t - B_s)) >= -tol over all grid
/// pairs and returns the first failing pair in scan order.
std::optional<SyncWitness> check_sync_hadamard(const OperatorField &fa, const OperatorField &fb,
                                               double tol);

struct FieldRecipe {
  enum class Kind { affine_increasing, power_family, custom_sampled };

  Kind kind = Kind::custom_sampled;
  int dim = 2;
  int m = 64;
  std::uint64_t seed = 0;
  /// Increasing nonnegative catalog function; affine_increasing only.
  std::string ramp = "id";
  /// Nonnegative catalog function alpha(t).
  std::string weight = "const:1";
  Monotonicity direction = Monotonicity::increasing;
  /// Explicit endpoints of the affine recipe; drawn from the seed if absent.
  std::optional<HermitianMatrix> p0;
  std::optional<HermitianMatrix> p1;
};

/// Midpoint grid t_k = (k - 1/2)/m with cells of measure 1/m. The declared
/// direction is verified before return.
OperatorField make_field(const FieldRecipe &r);

/// Accepts {kind, dim, m, seed, ramp, weight} plus optional direction.
FieldRecipe field_recipe_from_json(const nlohmann::json &j);
nlohmann::json to_json(const FieldRecipe &r);

std::string to_string(FieldRecipe::Kind k);

} // namespace cheb

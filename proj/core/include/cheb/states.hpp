#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cheb/linalg.hpp"
#include "cheb/report.hpp"

namespace cheb {

/// A state (positive unital linear functional) on the n x n matrices.
class StateDescriptor {
public:
  enum class Kind { normalized_trace, vector_state, hadamard_trace };

  /// tr(A)/n.
  static StateDescriptor normalized_trace(int dim);
  /// <Ax, x>; x must be a unit vector to 1e-12.
  static StateDescriptor vector_state(Vector x);
  /// tr(A o C)/alpha with alpha = tr(C); C must be positive definite.
  static StateDescriptor hadamard_trace(HermitianMatrix c);
  /// Same functional without the positivity check on C. Only meant for
  /// negative controls of validate_state.
  static StateDescriptor hadamard_trace_unchecked(HermitianMatrix c);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// "ntrace", "vec" or "hadtrace".
  std::string name() const;

  const Vector &vector() const { return x_; }
  const HermitianMatrix &filter() const { return c_; }
  double alpha() const noexcept { return alpha_; }

private:
  StateDescriptor(Kind k, int dim) : kind_(k), dim_(dim), c_(HermitianMatrix::identity(1)) {}
  Kind kind_;
  int dim_;
  Vector x_;
  HermitianMatrix c_;
  double alpha_ = 1.0;
};

/// Real value of the state. Inputs that are Hermitian only up to round-off
/// (commuting products) are accepted; an imaginary part above
/// 1e-10 * max(1, ||A||_F) is an internal-consistency error.
double apply_state(const StateDescriptor &tau, const Matrix &a);
double apply_state(const StateDescriptor &tau, const HermitianMatrix &a);

/// `ntrace`, `vec:<k>` (1-based basis vector), `vec:<file.json>` and
/// `hadtrace:<file.json>`. Files hold {"re": [...], "im": [...]} vectors or
/// the shared matrix format.
StateDescriptor parse_state(std::string_view spec, int dim);

/// Randomized audit of linearity (1e-10 * scale), positivity on random PSD
/// and rank-one matrices (1e-12 * scale) and unitality (1e-12).
CheckReport validate_state(const StateDescriptor &tau, int trials, std::uint64_t seed);

} // namespace cheb

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cheb/funcalc.hpp"

namespace cheb {

/// A Kubo-Ando operator mean identified by its representing function f on
/// (0, inf), which is operator monotone with f(1) = 1.
class MeanDescriptor {
public:
  /// Validates f(1) = 1 (to 1e-12) and that f is declared operator monotone.
  MeanDescriptor(std::string name, ScalarFunction representing,
                 std::optional<double> weight = std::nullopt);

  /// t^mu, mu in [0, 1].
  static MeanDescriptor geometric(double mu);
  /// 2t/(1+t).
  static MeanDescriptor harmonic();
  /// (1+t)/2.
  static MeanDescriptor arithmetic();

  const std::string &name() const noexcept { return name_; }
  const ScalarFunction &representing_function() const noexcept { return f_; }
  /// The mean-weight of the weighted geometric mean, when there is one.
  std::optional<double> weight() const noexcept { return weight_; }

private:
  std::string name_;
  ScalarFunction f_;
  std::optional<double> weight_;
};

/// `geo:<mu>`, `harmonic`, `arithmetic`, `custom:<function-spec>`.
MeanDescriptor parse_mean(std::string_view spec);

/// 1e-10 * max(1, tr A + tr B), added to both operands before inversion.
double mean_regularization(const HermitianMatrix &a, const HermitianMatrix &b);

/// A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}, evaluated on the
/// regularized pair A + eps I, B + eps I. Inputs must be PSD up to
/// 1e-10 * scale.
HermitianMatrix apply_mean(const MeanDescriptor &m, const HermitianMatrix &a,
                           const HermitianMatrix &b);

/// A #_mu B, written out directly rather than through apply_mean.
HermitianMatrix weighted_geometric(const HermitianMatrix &a, const HermitianMatrix &b, double mu);

} // namespace cheb

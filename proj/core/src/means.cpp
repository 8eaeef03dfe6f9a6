#include "cheb/means.hpp"

#include <charconv>
#include <cmath>

namespace cheb {

namespace {

constexpr double kPsdSlack = 1e-10;

void require_psd(const HermitianMatrix &a, const char *what) {
  const double lmin = lambda_min(a);
  if (lmin < -kPsdSlack * std::max(1.0, a.frobenius()))
    throw DomainError(std::string(what) + ": operand has negative eigenvalue", lmin);
}

std::string weight_name(double mu) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, mu);
  return "geo:" + std::string(buf, ptr);
}

struct RootPair {
  HermitianMatrix sqrt;
  HermitianMatrix inv_sqrt;
};

// Both roots from one eigendecomposition of the (regularized, so PD) input.
RootPair roots(const HermitianMatrix &a) {
  const EigenSystem es = hermitian_eigen(a);
  std::vector<double> r, ir;
  for (double x : es.values) {
    const double s = std::sqrt(std::max(x, 0.0));
    r.push_back(s);
    ir.push_back(1.0 / s);
  }
  return {spectral_compose(es.vectors, r), spectral_compose(es.vectors, ir)};
}

} // namespace

MeanDescriptor::MeanDescriptor(std::string name, ScalarFunction representing,
                               std::optional<double> weight)
    : name_(std::move(name)), f_(std::move(representing)), weight_(weight) {
  if (!f_.domain().contains(Interval::positive()))
    throw PreconditionError("mean '" + name_ + "': representing function must be defined on (0, inf)");
  if (std::abs(f_(1.0) - 1.0) > 1e-12)
    throw PreconditionError("mean '" + name_ + "': representing function has f(1) != 1");
  if (f_.flags().operator_monotone != Tri::declared_true)
    throw PreconditionError("mean '" + name_ + "': representing function is not declared operator monotone");
}

MeanDescriptor MeanDescriptor::geometric(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw PreconditionError("geometric mean: weight outside [0, 1]");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, mu);
  return {weight_name(mu), make_function("pow:" + std::string(buf, ptr)), mu};
}

MeanDescriptor MeanDescriptor::harmonic() { return {"harmonic", make_function("harm")}; }

MeanDescriptor MeanDescriptor::arithmetic() {
  return {"arithmetic", make_function("affine:0.5:0.5")};
}

MeanDescriptor parse_mean(std::string_view spec) {
  if (spec == "harmonic")
    return MeanDescriptor::harmonic();
  if (spec == "arithmetic")
    return MeanDescriptor::arithmetic();
  if (spec.starts_with("geo:")) {
    const std::string_view num = spec.substr(4);
    double mu = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), mu);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty())
      throw UnknownName("mean '" + std::string(spec) + "': bad weight");
    return MeanDescriptor::geometric(mu);
  }
  if (spec.starts_with("custom:"))
    return {std::string(spec), make_function(spec.substr(7))};
  throw UnknownName("unknown mean '" + std::string(spec) + "'");
}

double mean_regularization(const HermitianMatrix &a, const HermitianMatrix &b) {
  return 1e-10 * std::max(1.0, a.trace() + b.trace());
}

HermitianMatrix apply_mean(const MeanDescriptor &m, const HermitianMatrix &a,
                           const HermitianMatrix &b) {
  require_same_dim(a.dim(), b.dim(), "apply_mean");
  require_psd(a, "apply_mean");
  require_psd(b, "apply_mean");
  const double eps = mean_regularization(a, b);
  const auto id = HermitianMatrix::identity(a.dim());
  const HermitianMatrix ae = a + eps * id;
  const HermitianMatrix be = b + eps * id;

  const RootPair ra = roots(ae);
  EigenSystem inner = hermitian_eigen(HermitianMatrix::from_hermitian_part(
      ra.inv_sqrt.matrix() * be.matrix() * ra.inv_sqrt.matrix()));
  // The congruence of a definite matrix is definite; negative eigenvalues
  // here are amplified round-off.
  for (double &x : inner.values)
    x = std::max(x, 0.0);
  const HermitianMatrix fi = apply_function(m.representing_function(), inner);
  return HermitianMatrix::from_hermitian_part(ra.sqrt.matrix() * fi.matrix() * ra.sqrt.matrix());
}

HermitianMatrix weighted_geometric(const HermitianMatrix &a, const HermitianMatrix &b, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw PreconditionError("weighted_geometric: weight outside [0, 1]");
  require_same_dim(a.dim(), b.dim(), "weighted_geometric");
  require_psd(a, "weighted_geometric");
  require_psd(b, "weighted_geometric");
  const double eps = mean_regularization(a, b);
  const auto id = HermitianMatrix::identity(a.dim());
  const HermitianMatrix ae = a + eps * id;
  const HermitianMatrix be = b + eps * id;

  const RootPair ra = roots(ae);
  const EigenSystem inner = hermitian_eigen(HermitianMatrix::from_hermitian_part(
      ra.inv_sqrt.matrix() * be.matrix() * ra.inv_sqrt.matrix()));
  std::vector<double> powered;
  for (double x : inner.values)
    powered.push_back(std::pow(std::max(x, 0.0), mu));
  const Matrix middle = spectral_compose(inner.vectors, powered).matrix();
  return HermitianMatrix::from_hermitian_part(ra.sqrt.matrix() * middle * ra.sqrt.matrix());
}

} // namespace cheb

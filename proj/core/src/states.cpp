#include "cheb/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cheb/json_io.hpp"
#include "cheb/random.hpp"

namespace cheb {

StateDescriptor StateDescriptor::normalized_trace(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw DimensionMismatch("normalized_trace: dimension outside supported range");
  return {Kind::normalized_trace, dim};
}

StateDescriptor StateDescriptor::vector_state(Vector x) {
  if (x.size() < 1 || x.size() > kMaxDim)
    throw DimensionMismatch("vector_state: dimension outside supported range");
  if (std::abs(x.norm() - 1.0) > 1e-12)
    throw PreconditionError("vector_state: vector is not a unit vector");
  StateDescriptor s(Kind::vector_state, static_cast<int>(x.size()));
  s.x_ = std::move(x);
  return s;
}

StateDescriptor StateDescriptor::hadamard_trace_unchecked(HermitianMatrix c) {
  StateDescriptor s(Kind::hadamard_trace, c.dim());
  s.alpha_ = c.trace();
  if (s.alpha_ == 0.0)
    throw PreconditionError("hadamard_trace: tr(C) = 0");
  s.c_ = std::move(c);
  return s;
}

StateDescriptor StateDescriptor::hadamard_trace(HermitianMatrix c) {
  if (!(lambda_min(c) > 0.0))
    throw PreconditionError("hadamard_trace: filter matrix is not positive definite");
  return hadamard_trace_unchecked(std::move(c));
}

std::string StateDescriptor::name() const {
  switch (kind_) {
  case Kind::normalized_trace:
    return "ntrace";
  case Kind::vector_state:
    return "vec";
  case Kind::hadamard_trace:
    return "hadtrace";
  }
  return "?";
}

double apply_state(const StateDescriptor &tau, const Matrix &a) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("apply_state: matrix is not square");
  require_same_dim(tau.dim(), static_cast<int>(a.rows()), "apply_state");
  Complex v;
  switch (tau.kind()) {
  case StateDescriptor::Kind::normalized_trace:
    v = a.trace() / static_cast<double>(tau.dim());
    break;
  case StateDescriptor::Kind::vector_state:
    v = tau.vector().dot(a * tau.vector());
    break;
  case StateDescriptor::Kind::hadamard_trace:
    v = a.cwiseProduct(tau.filter().matrix()).trace() / tau.alpha();
    break;
  }
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, a.norm()))
    throw Error("apply_state: non-negligible imaginary part on a Hermitian contraction");
  return v.real();
}

double apply_state(const StateDescriptor &tau, const HermitianMatrix &a) {
  return apply_state(tau, a.matrix());
}

namespace {

nlohmann::json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw Error("'" + path + "': " + e.what());
  }
}

bool all_digits(std::string_view s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

} // namespace

StateDescriptor parse_state(std::string_view spec, int dim) {
  if (spec == "ntrace")
    return StateDescriptor::normalized_trace(dim);
  if (spec.starts_with("vec:")) {
    const std::string arg(spec.substr(4));
    if (all_digits(arg)) {
      const int k = std::stoi(arg);
      if (k < 1 || k > dim)
        throw PreconditionError("vec:" + arg + ": basis index outside 1.." + std::to_string(dim));
      Vector x = Vector::Zero(dim);
      x(k - 1) = 1.0;
      return StateDescriptor::vector_state(std::move(x));
    }
    const auto j = read_json_file(arg);
    const auto &re = j.at("re");
    Vector x(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i)
      x(static_cast<Eigen::Index>(i)) =
          Complex(re[i].get<double>(), j.contains("im") ? j["im"][i].get<double>() : 0.0);
    return StateDescriptor::vector_state(std::move(x));
  }
  if (spec.starts_with("hadtrace:"))
    return StateDescriptor::hadamard_trace(hermitian_from_json(read_json_file(std::string(spec.substr(9)))));
  throw UnknownName("unknown state '" + std::string(spec) + "'");
}

CheckReport validate_state(const StateDescriptor &tau, int trials, std::uint64_t seed) {
  if (trials < 1)
    throw PreconditionError("validate_state: need at least one trial");
  CheckReport report;
  report.suite_id = "validate_state:" + tau.name();
  report.trials = static_cast<std::size_t>(trials);
  report.dims = {tau.dim()};
  report.seed = seed;
  report.tolerance = 1e-12;
  const int n = tau.dim();

  auto record = [&](std::size_t trial, const char *check, double value, double tol,
                    double scale) {
    const double m = value / scale;
    nlohmann::json inst = {{"check", check}, {"value", value}};
    if (report.records.empty()) {
      report.min_margin = report.max_margin = m;
    } else {
      report.min_margin = std::min(report.min_margin, m);
      report.max_margin = std::max(report.max_margin, m);
    }
    report.records.push_back({trial, n, m});
    if (value < -tol * scale)
      report.violations.push_back({trial, m, value, inst});
  };

  const double unital = apply_state(tau, HermitianMatrix::identity(n));
  report.worst_residual = std::abs(unital - 1.0);
  record(0, "unitality", -std::abs(unital - 1.0), 1e-12, 1.0);

  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, report.suite_id, static_cast<std::uint64_t>(t)));
    const auto trial = static_cast<std::size_t>(t);

    const HermitianMatrix a = random_hermitian(rng, n);
    const HermitianMatrix b = random_hermitian(rng, n);
    const double ca = rng.uniform(-2.0, 2.0);
    const double cb = rng.uniform(-2.0, 2.0);
    const double lin = apply_state(tau, ca * a + cb * b) - ca * apply_state(tau, a) -
                       cb * apply_state(tau, b);
    const double lin_scale = std::max(1.0, std::abs(ca) * a.frobenius() + std::abs(cb) * b.frobenius());
    report.worst_residual = std::max(report.worst_residual, std::abs(lin));
    record(trial, "linearity", -std::abs(lin), 1e-10, lin_scale);

    const HermitianMatrix p = random_psd(rng, n, rng.uniform_int(1, n));
    record(trial, "positivity", apply_state(tau, p), 1e-12, std::max(1.0, p.frobenius()));

    // Rank-one projector onto a basis vector: exposes any negative weight.
    Matrix e = Matrix::Zero(n, n);
    const int k = t % n;
    e(k, k) = 1.0;
    record(trial, "positivity", apply_state(tau, e), 1e-12, 1.0);
  }
  return report;
}

} // namespace cheb

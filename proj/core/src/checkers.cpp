#include "cheb/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cheb {

namespace {

constexpr double kHypothesisTol = 1e-10;
constexpr int kSyncGrid = 64;
constexpr int kSupermultGrid = 32;
// Function values at eigenvalues that round to just below zero.
constexpr double kNegativeSlack = 1e-12;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double scale_of(std::span<const HermitianMatrix> ms) {
  double s = 1.0;
  for (const auto &m : ms)
    s = std::max(s, m.frobenius());
  return s;
}

void require_psd(const HermitianMatrix &a, const char *what) {
  const double lmin = lambda_min(a);
  if (lmin < -kHypothesisTol * std::max(1.0, a.frobenius()))
    throw PreconditionError(std::string(what) + " is not positive semidefinite (lambda_min = " +
                            num(lmin) + ")");
}

void require_pd(const HermitianMatrix &a, const char *what) {
  const double lmin = lambda_min(a);
  if (!(lmin > kHypothesisTol * std::max(1.0, a.frobenius())))
    throw PreconditionError(std::string(what) + " is not positive definite (lambda_min = " +
                            num(lmin) + ")");
}

/// Chain ordered A_1 <= A_2 <= ... (increasing) or A_1 >= A_2 >= ... (decreasing).
void require_chain(std::span<const HermitianMatrix> ms, Monotonicity m, const char *what) {
  const double tol = kHypothesisTol * scale_of(ms);
  for (std::size_t k = 0; k + 1 < ms.size(); ++k) {
    const auto &lo = m == Monotonicity::increasing ? ms[k] : ms[k + 1];
    const auto &hi = m == Monotonicity::increasing ? ms[k + 1] : ms[k];
    if (!loewner_geq(hi, lo, tol).holds)
      throw PreconditionError(std::string(what) + ": ordering fails between positions " +
                                  std::to_string(k + 1) + " and " + std::to_string(k + 2),
                              static_cast<std::ptrdiff_t>(k + 1));
  }
}

void require_lists(std::span<const double> w, std::span<const HermitianMatrix> as,
                   std::span<const HermitianMatrix> bs) {
  if (as.empty())
    throw PreconditionError("empty matrix list");
  if (w.size() != as.size() || bs.size() != as.size())
    throw PreconditionError("weight and matrix lists differ in length");
  for (std::size_t k = 0; k < w.size(); ++k)
    if (!(w[k] > 0.0))
      throw PreconditionError("weight " + std::to_string(k + 1) + " is not positive",
                              static_cast<std::ptrdiff_t>(k));
  const int n = as.front().dim();
  for (std::size_t k = 0; k < as.size(); ++k) {
    require_same_dim(n, as[k].dim(), "matrix list");
    require_same_dim(n, bs[k].dim(), "matrix list");
  }
}

void require_sync(const ScalarFunction &f, const ScalarFunction &g, const Interval &j) {
  if (const auto w = check_synchronous(f, g, j, kSyncGrid))
    throw PreconditionError(f.name() + " and " + g.name() + " are not synchronous on " +
                            j.to_string() + " (pair " + num(w->points[0]) + ", " +
                            num(w->points[1]) + ")");
}

void require_nonnegative_on(const ScalarFunction &f, const std::vector<double> &pts) {
  for (double x : pts)
    if (f(x) < -kNegativeSlack)
      throw PreconditionError(f.name() + " is negative at eigenvalue " + num(x));
}

void require_fields_psd_increasing(std::initializer_list<const OperatorField *> fs) {
  const char *names[] = {"field A", "field B", "field C", "field D"};
  std::size_t i = 0;
  for (const OperatorField *f : fs) {
    require_psd(f->matrices.front(), names[i]);
    require_chain(f->matrices, Monotonicity::increasing, names[i]);
    ++i;
  }
}

OperatorField hadamard_field(const OperatorField &fa, const OperatorField &fb) {
  std::vector<HermitianMatrix> ms;
  ms.reserve(fa.size());
  for (std::size_t k = 0; k < fa.size(); ++k)
    ms.push_back(hadamard(fa.matrices[k], fb.matrices[k]));
  return with_matrices(fa, std::move(ms));
}

double state_of_product(const StateDescriptor &tau, const HermitianMatrix &x,
                        const HermitianMatrix &y) {
  return apply_state(tau, Matrix(x.matrix() * y.matrix()));
}

void require_psd_pair(const HermitianMatrix &a, const HermitianMatrix &b) {
  require_same_dim(a.dim(), b.dim(), "operands");
  require_psd(a, "A");
  require_psd(b, "B");
}

} // namespace

std::string to_string(Form f) { return f == Form::printed ? "printed" : "proved"; }

Form parse_form(const std::string &s) {
  if (s == "printed")
    return Form::printed;
  if (s == "proved")
    return Form::proved;
  throw UnknownName("unknown statement form '" + s + "'");
}

Margin loewner_margin(const HermitianMatrix &lhs, const HermitianMatrix &rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "loewner_margin");
  return {Margin::Kind::loewner, lambda_min(lhs - rhs), std::max(lhs.frobenius(), rhs.frobenius())};
}

Margin scalar_margin(double lhs, double rhs) {
  return {Margin::Kind::scalar, lhs - rhs, std::max(std::abs(lhs), std::abs(rhs))};
}

Interval spectral_hull(std::initializer_list<const HermitianMatrix *> ms) {
  double lo = kInf;
  double hi = -kInf;
  for (const HermitianMatrix *m : ms) {
    const auto es = hermitian_eigen(*m);
    lo = std::min(lo, es.min());
    hi = std::max(hi, es.max());
  }
  return Interval::closed(lo, hi);
}

Margin margin_hadamard_chebyshev(const OperatorField &fa, const OperatorField &fb,
                                 const CheckOptions &opt) {
  fa.validate();
  fb.validate();
  require_same_layout(fa, fb);
  if (opt.check_hypotheses) {
    const double tol = kHypothesisTol * std::max(field_scale(fa), field_scale(fb));
    if (const auto w = check_sync_hadamard(fa, fb, tol))
      throw PreconditionError("fields lack the synchronous Hadamard property at grid pair (" +
                                  std::to_string(w->s) + ", " + std::to_string(w->t) + ")",
                              static_cast<std::ptrdiff_t>(w->t));
  }
  const HermitianMatrix lhs = total_weight(fa) * integrate(hadamard_field(fa, fb));
  const HermitianMatrix rhs = hadamard(integrate(fa), integrate(fb));
  return loewner_margin(lhs, rhs);
}

Margin margin_mean_hadamard(const OperatorField &fa, const OperatorField &fb,
                            const OperatorField &fc, const OperatorField &fd,
                            const MeanDescriptor &mean, const CheckOptions &opt) {
  for (const OperatorField *f : {&fa, &fb, &fc, &fd}) {
    f->validate();
    require_same_layout(fa, *f);
  }
  if (opt.check_hypotheses) {
    require_fields_psd_increasing({&fa, &fb, &fc, &fd});
    if (const auto w = check_supermultiplicative(mean.representing_function(),
                                                 Interval::closed(0.0, 8.0), kSupermultGrid))
      throw PreconditionError("representing function of " + mean.name() +
                              " is not super-multiplicative (pair " + num(w->points[0]) + ", " +
                              num(w->points[1]) + ")");
  }
  std::vector<HermitianMatrix> inner, ac, bd;
  for (std::size_t k = 0; k < fa.size(); ++k) {
    inner.push_back(apply_mean(mean, hadamard(fa.matrices[k], fb.matrices[k]),
                               hadamard(fc.matrices[k], fd.matrices[k])));
    ac.push_back(apply_mean(mean, fa.matrices[k], fc.matrices[k]));
    bd.push_back(apply_mean(mean, fb.matrices[k], fd.matrices[k]));
  }
  const HermitianMatrix lhs = total_weight(fa) * integrate(with_matrices(fa, std::move(inner)));
  const HermitianMatrix rhs = hadamard(integrate(with_matrices(fa, std::move(ac))),
                                       integrate(with_matrices(fa, std::move(bd))));
  return loewner_margin(lhs, rhs);
}

Margin margin_geo_split(const OperatorField &fa, const OperatorField &fb, double mu,
                        const CheckOptions &opt) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw PreconditionError("mean-weight " + num(mu) + " outside [0, 1]");
  fa.validate();
  fb.validate();
  require_same_layout(fa, fb);
  if (opt.check_hypotheses)
    require_fields_psd_increasing({&fa, &fb});
  std::vector<HermitianMatrix> g1, g2;
  for (std::size_t k = 0; k < fa.size(); ++k) {
    g1.push_back(weighted_geometric(fa.matrices[k], fb.matrices[k], mu));
    g2.push_back(weighted_geometric(fa.matrices[k], fb.matrices[k], 1.0 - mu));
  }
  const HermitianMatrix lhs = total_weight(fa) * integrate(hadamard_field(fa, fb));
  const HermitianMatrix rhs = hadamard(integrate(with_matrices(fa, std::move(g1))),
                                       integrate(with_matrices(fa, std::move(g2))));
  return loewner_margin(lhs, rhs);
}

Margin margin_monotone_fn(std::span<const double> weights, std::span<const HermitianMatrix> as,
                          std::span<const HermitianMatrix> bs, const ScalarFunction &f,
                          const CheckOptions &opt) {
  require_lists(weights, as, bs);
  if (opt.check_hypotheses) {
    require_chain(as, Monotonicity::decreasing, "A chain");
    require_chain(bs, Monotonicity::decreasing, "B chain");
    require_psd(as.back(), "last A");
    require_psd(bs.back(), "last B");
    if (f.flags().operator_monotone != Tri::declared_true)
      throw PreconditionError(f.name() + " is not declared operator monotone");
    if (const auto w = check_supermultiplicative(f, Interval::closed(0.0, 8.0), kSupermultGrid))
      throw PreconditionError(f.name() + " is not super-multiplicative (pair " +
                              num(w->points[0]) + ", " + num(w->points[1]) + ")");
  }
  const std::vector<double> w(weights.begin(), weights.end());
  std::vector<HermitianMatrix> fab, fa, fb;
  for (std::size_t k = 0; k < as.size(); ++k) {
    fab.push_back(apply_function(f, hadamard(as[k], bs[k])));
    fa.push_back(apply_function(f, as[k]));
    fb.push_back(apply_function(f, bs[k]));
  }
  const OperatorField lf = discrete_field(w, std::move(fab));
  const HermitianMatrix lhs = total_weight(lf) * integrate(lf);
  const HermitianMatrix rhs =
      hadamard(integrate(discrete_field(w, std::move(fa))), integrate(discrete_field(w, std::move(fb))));
  return loewner_margin(lhs, rhs);
}

Margin margin_det(std::span<const double> weights, std::span<const HermitianMatrix> as,
                  std::span<const HermitianMatrix> bs, const CheckOptions &opt) {
  require_lists(weights, as, bs);
  if (opt.check_hypotheses) {
    require_chain(as, Monotonicity::decreasing, "A chain");
    require_chain(bs, Monotonicity::decreasing, "B chain");
    require_psd(as.back(), "last A");
    require_psd(bs.back(), "last B");
  }
  const double n = as.front().dim();
  const std::vector<double> w(weights.begin(), weights.end());
  std::vector<HermitianMatrix> ab;
  for (std::size_t k = 0; k < as.size(); ++k)
    ab.push_back(hadamard(as[k], bs[k]));
  const OperatorField f = discrete_field(w, std::move(ab));
  const double lhs = std::pow(total_weight(f), n) * trace_det(integrate(f)).det.real();
  double da = 0.0;
  double db = 0.0;
  for (std::size_t k = 0; k < as.size(); ++k) {
    da += std::pow(w[k], n) * trace_det(as[k]).det.real();
    db += std::pow(w[k], n) * trace_det(bs[k]).det.real();
  }
  return scalar_margin(lhs, da * db);
}

Margin margin_trace(std::span<const double> weights, std::span<const HermitianMatrix> as,
                    std::span<const HermitianMatrix> bs, const CheckOptions &opt) {
  require_lists(weights, as, bs);
  if (opt.check_hypotheses) {
    require_chain(as, Monotonicity::decreasing, "A chain");
    require_chain(bs, Monotonicity::increasing, "B chain");
    require_psd(bs.front(), "first B");
  }
  // Invertibility is needed regardless of the hypothesis switch.
  for (const auto &a : as)
    require_pd(a, "A_j");
  const ScalarFunction inv = make_function("inv");
  double w_sum = 0.0;
  double lhs_sum = 0.0;
  double inv_tr = 0.0;
  double tr_b = 0.0;
  for (std::size_t k = 0; k < as.size(); ++k) {
    const Matrix prod = apply_function(inv, as[k]).matrix() * bs[k].matrix();
    w_sum += weights[k];
    lhs_sum += weights[k] * prod.trace().real();
    inv_tr += weights[k] * (1.0 / as[k].trace());
    tr_b += weights[k] * bs[k].trace();
  }
  return scalar_margin(w_sum * lhs_sum, inv_tr * tr_b);
}

Margin margin_two_states(const StateDescriptor &tau1, const StateDescriptor &tau2,
                         const ScalarFunction &f, const ScalarFunction &g,
                         const HermitianMatrix &a, const HermitianMatrix &b,
                         const CheckOptions &opt) {
  require_same_dim(a.dim(), b.dim(), "margin_two_states");
  if (opt.check_hypotheses)
    require_sync(f, g, spectral_hull({&a, &b}));
  const auto fa = apply_function(f, a);
  const auto ga = apply_function(g, a);
  const auto fb = apply_function(f, b);
  const auto gb = apply_function(g, b);
  const double lhs = state_of_product(tau1, fa, ga) + state_of_product(tau2, fb, gb);
  const double rhs = apply_state(tau1, fa) * apply_state(tau2, gb) +
                     apply_state(tau2, fb) * apply_state(tau1, ga);
  return scalar_margin(lhs, rhs);
}

Margin margin_decreasing_state(const StateDescriptor &tau, const ScalarFunction &f,
                               const ScalarFunction &g, const HermitianMatrix &a,
                               const HermitianMatrix &b, const CheckOptions &opt) {
  require_same_dim(a.dim(), b.dim(), "margin_decreasing_state");
  if (opt.check_hypotheses) {
    const auto v = loewner_geq(b, a, kHypothesisTol * std::max({1.0, a.frobenius(), b.frobenius()}));
    if (!v.holds)
      throw PreconditionError("A <= B fails (lambda_min(B - A) = " + num(v.margin) + ")");
    if (f.flags().monotone_decreasing != Tri::declared_true)
      throw PreconditionError(f.name() + " is not declared decreasing");
    if (f.flags().nonnegative != Tri::declared_true)
      throw PreconditionError(f.name() + " is not declared nonnegative");
    if (g.flags().operator_decreasing != Tri::declared_true)
      throw PreconditionError(g.name() + " is not declared operator decreasing");
  }
  const auto fa = apply_function(f, a);
  const auto ga = apply_function(g, a);
  const double lhs = state_of_product(tau, fa, ga);
  const double rhs = opt.form == Form::printed
                         ? apply_state(tau, apply_function(f, b)) * apply_state(tau, ga)
                         : apply_state(tau, fa) * apply_state(tau, apply_function(g, b));
  return scalar_margin(lhs, rhs);
}

Margin margin_mixed_state(const StateDescriptor &tau1, const StateDescriptor &tau2,
                          const ScalarFunction &f, const ScalarFunction &g,
                          const HermitianMatrix &a, const HermitianMatrix &b,
                          const CheckOptions &opt) {
  require_same_dim(a.dim(), b.dim(), "margin_mixed_state");
  const double t1a = apply_state(tau1, a);
  const double t1b = apply_state(tau1, b);
  const double t2a = apply_state(tau2, a);
  if (opt.check_hypotheses) {
    const auto whole_line = [](const ScalarFunction &h) {
      return h.domain().lo == -kInf && h.domain().hi == kInf;
    };
    if (!whole_line(f) || !whole_line(g))
      throw PreconditionError("mixed-state inequality needs functions defined on the real line");
    Interval j = spectral_hull({&a, &b});
    j.lo = std::min({j.lo, t1a, t1b, t2a});
    j.hi = std::max({j.hi, t1a, t1b, t2a});
    require_sync(f, g, j);
  }
  const auto fb = apply_function(f, b);
  const auto gb = apply_function(g, b);
  if (opt.form == Form::printed) {
    const auto fa = apply_function(f, a);
    const auto ga = apply_function(g, a);
    const double lhs = state_of_product(tau2, fa, ga) + f(t1b) * g(t1b);
    const double rhs = f(t1a) * apply_state(tau2, gb) + apply_state(tau1, fb) * g(t2a);
    return scalar_margin(lhs, rhs);
  }
  const double lhs = state_of_product(tau2, fb, gb) + f(t1a) * g(t1a);
  const double rhs = f(t1a) * apply_state(tau2, gb) + apply_state(tau2, fb) * g(t1a);
  return scalar_margin(lhs, rhs);
}

Margin margin_aczel(const StateDescriptor &tau, const ScalarFunction &f, const ScalarFunction &g,
                    double alpha, double beta, const HermitianMatrix &a, const HermitianMatrix &b,
                    const CheckOptions &opt) {
  require_same_dim(a.dim(), b.dim(), "margin_aczel");
  if (opt.check_hypotheses) {
    if (alpha < 0.0 || beta < 0.0)
      throw PreconditionError("bounds alpha and beta must be nonnegative");
    require_psd_pair(a, b);
    auto pts = hermitian_eigen(a).values;
    const auto pb = hermitian_eigen(b).values;
    pts.insert(pts.end(), pb.begin(), pb.end());
    for (double x : pts) {
      const double fx = f(x);
      const double gx = g(x);
      if (fx < -kNegativeSlack || fx > alpha * (1.0 + 1e-12) + 1e-12)
        throw PreconditionError(f.name() + " leaves [0, alpha] at eigenvalue " + num(x));
      if (gx < -kNegativeSlack || gx > beta * (1.0 + 1e-12) + 1e-12)
        throw PreconditionError(g.name() + " leaves [0, beta] at eigenvalue " + num(x));
    }
  }
  const auto fb = apply_function(f, b);
  const auto gb = apply_function(g, b);
  const double lhs = alpha * beta - state_of_product(tau, fb, gb);
  const double rhs = (alpha - apply_state(tau, fb)) * (beta - apply_state(tau, apply_function(g, a)));
  return scalar_margin(lhs, rhs);
}

Margin margin_eigsum(const HermitianMatrix &a, const HermitianMatrix &b, int j) {
  require_same_dim(a.dim(), b.dim(), "margin_eigsum");
  const int n = a.dim();
  if (j < 1 || j > n)
    throw PreconditionError("eigenvalue index " + std::to_string(j) + " outside 1.." + std::to_string(n));
  const auto k = static_cast<std::size_t>(j - 1);
  const double lhs = hermitian_eigen(a + b).values[k];
  const double rhs = hermitian_eigen(a).min() + hermitian_eigen(b).values[k];
  return scalar_margin(lhs, rhs);
}

namespace {

struct SingularOperands {
  HermitianMatrix fa, ga, fb, gb;
};

SingularOperands singular_operands(const ScalarFunction &f, const ScalarFunction &g,
                                   const HermitianMatrix &a, const HermitianMatrix &b, int j,
                                   const CheckOptions &opt) {
  require_same_dim(a.dim(), b.dim(), "singular-value inequality");
  if (j < 1 || j > a.dim())
    throw PreconditionError("singular value index " + std::to_string(j) + " outside 1.." +
                            std::to_string(a.dim()));
  if (opt.check_hypotheses) {
    require_psd_pair(a, b);
    const Interval hull = spectral_hull({&a, &b});
    Interval j0 = Interval::closed(std::max(0.0, hull.lo), std::max(0.0, hull.hi));
    auto pts = hermitian_eigen(a).values;
    const auto pb = hermitian_eigen(b).values;
    pts.insert(pts.end(), pb.begin(), pb.end());
    require_nonnegative_on(f, pts);
    require_nonnegative_on(g, pts);
    require_sync(f, g, j0);
  }
  return {apply_function(f, a), apply_function(g, a), apply_function(f, b), apply_function(g, b)};
}

} // namespace

Margin margin_singular_main(const ScalarFunction &f, const ScalarFunction &g,
                            const HermitianMatrix &a, const HermitianMatrix &b, int j,
                            const CheckOptions &opt) {
  const auto op = singular_operands(f, g, a, b, j, opt);
  const auto k = static_cast<std::size_t>(j - 1);
  const auto s_fa = singular_values(op.fa);
  const auto s_ga = singular_values(op.ga);
  const auto s_fb = singular_values(op.fb);
  const auto s_gb = singular_values(op.gb);
  const double lhs = singular_values(Matrix(op.fa.matrix() * op.ga.matrix()))[k] +
                     singular_values(Matrix(op.fb.matrix() * op.gb.matrix()))[k];
  const double tail = opt.form == Form::printed
                          ? s_fa.back() * s_gb.back()
                          : (s_fa.back() * s_gb.back() + s_fb.back() * s_ga.back()) / 2.0;
  const double rhs = tail + (s_ga[k] * s_fb[k] + s_gb[k] * s_fa[k]) / 2.0;
  return scalar_margin(lhs, rhs);
}

Margin margin_singular_alt(const ScalarFunction &f, const ScalarFunction &g,
                           const HermitianMatrix &a, const HermitianMatrix &b, int j,
                           const CheckOptions &opt) {
  const auto op = singular_operands(f, g, a, b, j, opt);
  const auto k = static_cast<std::size_t>(j - 1);
  const double sa = singular_values(a)[k];
  const double lhs = f(sa) * g(sa) + singular_values(Matrix(op.fb.matrix() * op.gb.matrix()))[k];
  const double rhs = f(sa) * singular_values(op.gb).back() + singular_values(op.fb)[k] * g(sa);
  return scalar_margin(lhs, rhs);
}

} // namespace cheb

#include "cheb/funcalc.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace cheb {

namespace {

constexpr int kProbePoints = 256;
constexpr double kProbeWindow = 16.0;
constexpr double kSupermultTol = 1e-12;
constexpr double kSyncTol = 1e-12;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const char *first = text.data();
  const char *last = text.data() + text.size();
  if (!text.empty() && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty())
    throw UnknownName("function '" + std::string(spec) + "': bad numeric parameter '" +
                      std::string(text) + "'");
  return value;
}

Tri tri(bool b) { return b ? Tri::declared_true : Tri::declared_false; }

FunctionFlags constant_flags(bool nonneg) {
  return {Tri::declared_true, Tri::declared_true, Tri::declared_true, Tri::declared_true,
          tri(nonneg)};
}

std::vector<double> probe_points(const Interval &d) {
  std::vector<double> pts;
  pts.reserve(kProbePoints);
  const double lo = std::isfinite(d.lo) ? d.lo : (std::isfinite(d.hi) ? d.hi - kProbeWindow : -kProbeWindow);
  const double hi = std::isfinite(d.hi) ? d.hi : lo + (std::isfinite(d.lo) ? kProbeWindow : 2 * kProbeWindow);
  for (int k = 0; k < kProbePoints; ++k) {
    // Interior points plus both closed endpoints.
    double x;
    if (k == 0 && d.lo_closed)
      x = d.lo;
    else if (k == kProbePoints - 1 && d.hi_closed)
      x = d.hi;
    else
      x = lo + (hi - lo) * (k + 0.5) / kProbePoints;
    pts.push_back(x);
  }
  return pts;
}

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

} // namespace

bool Interval::empty() const {
  if (lo > hi)
    return true;
  if (lo == hi)
    return !(lo_closed && hi_closed);
  return false;
}

bool Interval::contains(double x, double slack) const {
  if (std::isnan(x))
    return false;
  const bool above = lo_closed ? x >= lo - slack : x > lo;
  const bool below = hi_closed ? x <= hi + slack : x < hi;
  return above && below;
}

bool Interval::contains(const Interval &o) const {
  if (o.empty())
    return true;
  const bool lo_ok = o.lo > lo || (o.lo == lo && (lo_closed || !o.lo_closed));
  const bool hi_ok = o.hi < hi || (o.hi == hi && (hi_closed || !o.hi_closed));
  return lo_ok && hi_ok;
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
  return os.str();
}

ScalarFunction::ScalarFunction(std::string name, Interval domain, Rule rule, FunctionFlags flags)
    : name_(std::move(name)), domain_(domain), rule_(std::move(rule)), flags_(flags) {
  if (domain_.empty())
    throw PreconditionError("function '" + name_ + "': empty domain");
  for (double x : probe_points(domain_)) {
    const double y = rule_(x);
    if (!std::isfinite(y))
      throw DomainError("function '" + name_ + "' is not finite at probe point " +
                            format_number(x),
                        x);
  }
}

double ScalarFunction::operator()(double x) const {
  if (domain_.contains(x))
    return rule_(x);
  if (domain_.lo_closed && x < domain_.lo && x >= domain_.lo - kDomainSlack)
    return rule_(domain_.lo);
  if (domain_.hi_closed && x > domain_.hi && x <= domain_.hi + kDomainSlack)
    return rule_(domain_.hi);
  throw DomainError("function '" + name_ + "': argument " + format_number(x) +
                        " outside domain " + domain_.to_string(),
                    x);
}

ScalarFunction FunctionCatalog::make(std::string_view spec) const {
  const auto parts = split(spec, ':');
  const std::string_view head = parts.front();
  const std::string name(spec);
  auto want = [&](std::size_t nparams) {
    if (parts.size() != nparams + 1)
      throw UnknownName("function '" + name + "': expected " + std::to_string(nparams) +
                        " parameter(s)");
  };
  auto param = [&](std::size_t i) { return parse_number(parts[i], spec); };

  if (head == "id") {
    want(0);
    return {name, Interval::real_line(), [](double x) { return x; },
            {Tri::declared_true, Tri::declared_false, Tri::declared_true, Tri::declared_false,
             Tri::declared_false}};
  }
  if (head == "pow") {
    want(1);
    const double p = param(1);
    if (p == 0.0)
      return {name, Interval::nonnegative(), [](double) { return 1.0; }, constant_flags(true)};
    if (p > 0.0)
      return {name, Interval::nonnegative(), [p](double x) { return std::pow(x, p); },
              {Tri::declared_true, Tri::declared_false, tri(p <= 1.0), Tri::declared_false,
               Tri::declared_true}};
    return {name, Interval::positive(), [p](double x) { return std::pow(x, p); },
            {Tri::declared_false, Tri::declared_true, Tri::declared_false, tri(p >= -1.0),
             Tri::declared_true}};
  }
  if (head == "exp") {
    want(1);
    const double a = param(1);
    if (a == 0.0)
      return {name, Interval::real_line(), [](double) { return 1.0; }, constant_flags(true)};
    return {name, Interval::real_line(), [a](double x) { return std::exp(a * x); },
            {tri(a > 0.0), tri(a < 0.0), Tri::declared_false, Tri::declared_false,
             Tri::declared_true}};
  }
  if (head == "log") {
    want(0);
    return {name, Interval::positive(), [](double x) { return std::log(x); },
            {Tri::declared_true, Tri::declared_false, Tri::declared_true, Tri::declared_false,
             Tri::declared_false}};
  }
  if (head == "inv") {
    want(0);
    return {name, Interval::positive(), [](double x) { return 1.0 / x; },
            {Tri::declared_false, Tri::declared_true, Tri::declared_false, Tri::declared_true,
             Tri::declared_true}};
  }
  if (head == "harm") {
    want(0);
    return {name, Interval::nonnegative(), [](double x) { return 2.0 * x / (1.0 + x); },
            {Tri::declared_true, Tri::declared_false, Tri::declared_true, Tri::declared_false,
             Tri::declared_true}};
  }
  if (head == "frac") {
    want(0);
    return {name, Interval::nonnegative(), [](double x) { return x / (1.0 + x); },
            {Tri::declared_true, Tri::declared_false, Tri::declared_true, Tri::declared_false,
             Tri::declared_true}};
  }
  if (head == "affine") {
    want(2);
    const double a = param(1);
    const double b = param(2);
    if (a == 0.0)
      return {name, Interval::real_line(), [b](double) { return b; }, constant_flags(b >= 0.0)};
    return {name, Interval::real_line(), [a, b](double x) { return a * x + b; },
            {tri(a > 0.0), tri(a < 0.0), tri(a > 0.0), tri(a < 0.0), Tri::declared_false}};
  }
  if (head == "min") {
    want(1);
    const double c = param(1);
    return {name, Interval::real_line(), [c](double x) { return std::min(x, c); },
            {Tri::declared_true, Tri::declared_false, Tri::declared_false, Tri::declared_false,
             Tri::declared_false}};
  }
  if (head == "const") {
    want(1);
    const double c = param(1);
    return {name, Interval::real_line(), [c](double) { return c; }, constant_flags(c >= 0.0)};
  }
  throw UnknownName("unknown function '" + name + "'");
}

std::vector<std::string> FunctionCatalog::forms() const {
  return {"id", "pow:<p>", "exp:<a>", "log", "inv", "harm", "frac",
          "affine:<a>:<b>", "min:<c>", "const:<c>"};
}

const FunctionCatalog &function_catalog() {
  static const FunctionCatalog catalog;
  return catalog;
}

ScalarFunction make_function(std::string_view spec) { return function_catalog().make(spec); }

ScalarFunction compose(const ScalarFunction &outer, const ScalarFunction &inner) {
  return {outer.name() + "." + inner.name(), inner.domain(),
          [outer, inner](double x) { return outer(inner(x)); }, FunctionFlags{}};
}

HermitianMatrix apply_function(const ScalarFunction &f, const EigenSystem &es) {
  std::vector<double> fv;
  fv.reserve(es.values.size());
  for (double x : es.values)
    fv.push_back(f(x));
  return spectral_compose(es.vectors, fv);
}

HermitianMatrix apply_function(const ScalarFunction &f, const HermitianMatrix &a) {
  return apply_function(f, hermitian_eigen(a));
}

std::vector<double> uniform_grid(const Interval &j, int n) {
  if (j.empty())
    throw PreconditionError("uniform_grid: empty interval");
  if (!j.bounded())
    throw PreconditionError("uniform_grid: interval must be bounded");
  if (n < 2)
    throw PreconditionError("uniform_grid: need at least two points");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    g[static_cast<std::size_t>(k)] = j.lo + (j.hi - j.lo) * k / (n - 1);
  g.back() = j.hi;
  return g;
}

std::optional<Witness> check_synchronous(const ScalarFunction &f, const ScalarFunction &g,
                                         const Interval &j, int grid_n) {
  if (j.empty())
    throw PreconditionError("check_synchronous: empty interval");
  const auto grid = uniform_grid(j, grid_n);
  std::vector<double> fv, gv;
  for (double x : grid) {
    fv.push_back(f(x));
    gv.push_back(g(x));
  }
  std::optional<Witness> worst;
  for (std::size_t s = 0; s < grid.size(); ++s)
    for (std::size_t t = s + 1; t < grid.size(); ++t) {
      const double prod = (fv[t] - fv[s]) * (gv[t] - gv[s]);
      if (prod < -kSyncTol && (!worst || -prod > worst->violation))
        worst = Witness{{grid[s], grid[t]}, -prod};
    }
  return worst;
}

std::optional<Witness> check_supermultiplicative(const ScalarFunction &f, const Interval &j,
                                                 int grid_n) {
  if (j.empty())
    throw PreconditionError("check_supermultiplicative: empty interval");
  const auto grid = uniform_grid(j, grid_n);
  std::optional<Witness> worst;
  for (double x : grid)
    for (double y : grid) {
      const double xy = x * y;
      if (!f.domain().contains(xy, kDomainSlack))
        throw PreconditionError("check_supermultiplicative: product of (" + format_number(x) +
                                ", " + format_number(y) + ") = " + format_number(xy) +
                                " leaves the domain of " + f.name());
      const double gap = f(x) * f(y) - f(xy);
      if (gap > kSupermultTol && (!worst || gap > worst->violation))
        worst = Witness{{x, y}, gap};
    }
  return worst;
}

} // namespace cheb

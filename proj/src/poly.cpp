#include "isospec/poly.hpp"

#include <algorithm>

namespace isospec {

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

Monomial monomial_add(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    const int s = a[i] + b[i];
    if (s > 255) throw Error("monomial exponent overflow");
    r[i] = static_cast<std::uint8_t>(s);
  }
  return r;
}

Monomial unit_monomial(int var, int power) {
  if (var < 0 || var >= kMaxVars) throw Error("monomial: variable index out of range");
  Monomial m{};
  m[var] = static_cast<std::uint8_t>(power);
  return m;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto e : m) {
    h ^= e;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

namespace {

void enumerate_degree(int nvars, int var, int remaining, Monomial& cur, std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(nvars, var + 1, remaining - e, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Monomial> monomials_up_to(int nvars, int d) {
  std::vector<Monomial> out;
  if (nvars <= 0) {
    out.push_back(Monomial{});
    return out;
  }
  for (int k = 0; k <= d; ++k) {
    Monomial cur{};
    enumerate_degree(nvars, 0, k, cur, out);
  }
  return out;
}

Polynomial prune(const Polynomial& p, double tol) {
  const double cut = tol * p.max_abs_coefficient();
  Polynomial r(p.nvars());
  for (const auto& [m, c] : p.terms())
    if (std::abs(c) > cut) r.add_term(m, c);
  return r;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) {
  for (const auto& [m, c] : p.terms()) {
    Term t{c, {}};
    for (int i = 0; i < p.nvars(); ++i)
      if (m[i]) t.factors.emplace_back(i, m[i]);
    degree_ = std::max(degree_, monomial_degree(m));
    terms_.push_back(std::move(t));
  }
}

double CompiledPolynomial::evaluate(const Matrix& powers) const {
  double s = 0.0;
  for (const Term& t : terms_) {
    double v = t.coefficient;
    for (const auto& [i, e] : t.factors) v *= powers(i, e);
    s += v;
  }
  return s;
}

Matrix power_table(const Vector& x, int max_power) {
  Matrix t(x.size(), max_power + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    t(i, 0) = 1.0;
    for (int e = 1; e <= max_power; ++e) t(i, e) = t(i, e - 1) * x(i);
  }
  return t;
}

}  // namespace isospec

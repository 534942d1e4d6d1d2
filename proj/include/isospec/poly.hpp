#pragma once

// Sparse multivariate polynomials in at most kMaxVars variables. Terms are kept
// in an ordered map so iteration order (and therefore every floating point sum
// built from it) is deterministic.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "isospec/numkit.hpp"

namespace isospec {

inline constexpr int kMaxVars = 16;
using Monomial = std::array<std::uint8_t, kMaxVars>;

int monomial_degree(const Monomial& m);
Monomial monomial_add(const Monomial& a, const Monomial& b);
Monomial unit_monomial(int var, int power = 1);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

/// All exponent vectors in `nvars` variables with total degree <= d, in
/// graded lexicographic order.
std::vector<Monomial> monomials_up_to(int nvars, int d);

template <class T>
class BasicPolynomial {
 public:
  using Terms = std::map<Monomial, T>;

  BasicPolynomial() = default;
  explicit BasicPolynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0 || nvars > kMaxVars) throw Error("polynomial: unsupported variable count");
  }

  static BasicPolynomial constant(int nvars, const T& c) {
    BasicPolynomial p(nvars);
    if (c != T(0)) p.terms_[Monomial{}] = c;
    return p;
  }
  static BasicPolynomial variable(int nvars, int i) {
    BasicPolynomial p(nvars);
    p.terms_[unit_monomial(i)] = T(1);
    return p;
  }
  static BasicPolynomial monomial(int nvars, const Monomial& m, const T& c = T(1)) {
    BasicPolynomial p(nvars);
    if (c != T(0)) p.terms_[m] = c;
    return p;
  }
  /// sum_{i in vars} x_i^2
  static BasicPolynomial squared_norm(int nvars, const std::vector<int>& vars) {
    BasicPolynomial p(nvars);
    for (int v : vars) p.terms_[unit_monomial(v, 2)] += T(1);
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
    return d;
  }

  void add_term(const Monomial& m, const T& c) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  BasicPolynomial& operator*=(const T& s) {
    if (s == T(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(BasicPolynomial a, const T& s) { return a *= s; }
  friend BasicPolynomial operator*(const T& s, BasicPolynomial a) { return a *= s; }
  friend BasicPolynomial operator-(BasicPolynomial a) { return a *= T(-1); }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    a.check(b);
    BasicPolynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(monomial_add(ma, mb), ca * cb);
    return r;
  }

  BasicPolynomial pow(int k) const {
    BasicPolynomial r = constant(nvars_, T(1));
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  BasicPolynomial derivative(int var) const {
    BasicPolynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      --d[var];
      r.add_term(d, c * T(static_cast<int>(m[var])));
    }
    return r;
  }

  /// Substitutes x_i -> x_{perm[i]}.
  BasicPolynomial rename(const std::vector<int>& perm, int new_nvars) const {
    BasicPolynomial r(new_nvars);
    for (const auto& [m, c] : terms_) {
      Monomial out{};
      for (int i = 0; i < nvars_; ++i)
        if (m[i]) out[perm[i]] += m[i];
      r.add_term(out, c);
    }
    return r;
  }

  template <class F>
  auto transform(F&& f) const {
    using U = decltype(f(std::declval<T>()));
    BasicPolynomial<U> r(nvars_);
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  double evaluate(const Vector& x) const {
    if (x.size() != nvars_) throw Error("polynomial: evaluation point has wrong dimension");
    double s = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = static_cast<double>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < m[i]; ++e) t *= x(i);
      s += t;
    }
    return s;
  }

  double max_abs_coefficient() const {
    double r = 0.0;
    for (const auto& [m, c] : terms_) r = std::max(r, std::abs(static_cast<double>(c)));
    return r;
  }

  bool operator==(const BasicPolynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

 private:
  void check(const BasicPolynomial& o) const {
    if (o.nvars_ != nvars_) throw Error("polynomial: variable count mismatch");
  }
  int nvars_ = 0;
  Terms terms_;
};

using Polynomial = BasicPolynomial<double>;

/// Drops coefficients with |c| <= tol * max|c|.
Polynomial prune(const Polynomial& p, double tol);

/// A polynomial flattened for repeated evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);
  /// `powers(i, e)` must hold x_i^e for e up to the polynomial's degree.
  double evaluate(const Matrix& powers) const;
  int degree() const { return degree_; }

 private:
  struct Term {
    double coefficient;
    std::vector<std::pair<int, int>> factors;  // (variable, exponent)
  };
  std::vector<Term> terms_;
  int degree_ = 0;
};

/// Table of x_i^e, e = 0..max_power, laid out as a nvars x (max_power+1) matrix.
Matrix power_table(const Vector& x, int max_power);

}  // namespace isospec

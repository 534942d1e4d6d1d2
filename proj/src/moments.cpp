#include "isospec/moments.hpp"

#include <cmath>
#include <numbers>

namespace isospec {

const char* domain_name(Domain d) { return d == Domain::Sphere ? "sphere" : "ball"; }

Rational sphere_mean(const Monomial& alpha, int n) {
  if (n < 1) throw Error("sphere_mean: dimension must be positive");
  boost::multiprecision::cpp_int num = 1, den = 1;
  int half = 0;
  for (int i = 0; i < kMaxVars; ++i) {
    if (alpha[i] % 2) return Rational(0);
    if (alpha[i] && i >= n) throw Error("sphere_mean: exponent on a missing coordinate");
    for (int k = alpha[i] - 1; k > 1; k -= 2) num *= k;
    half += alpha[i] / 2;
  }
  for (int j = 0; j < half; ++j) den *= (n + 2 * j);
  return Rational(num, den);
}

Rational ball_mean(const Monomial& alpha, int n) {
  return sphere_mean(alpha, n) * Rational(n, monomial_degree(alpha) + n);
}

Rational domain_mean(Domain d, const Monomial& alpha, int n) {
  return d == Domain::Sphere ? sphere_mean(alpha, n) : ball_mean(alpha, n);
}

double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

double ball_volume(int n) { return sphere_area(n) / n; }

double sphere_moment(const Monomial& alpha, int n) {
  return static_cast<double>(sphere_mean(alpha, n)) * sphere_area(n);
}

double ball_moment(const Monomial& alpha, int n) {
  return static_cast<double>(ball_mean(alpha, n)) * ball_volume(n);
}

Rational mean_value(const RationalPolynomial& p, Domain d) {
  Rational s = 0;
  for (const auto& [m, c] : p.terms()) s += c * domain_mean(d, m, p.nvars());
  return s;
}

MomentTable::MomentTable(Domain domain, int n) : domain_(domain), n_(n) {
  if (n < 1) throw Error("moment table: dimension must be positive");
  double_factorial_.assign(256, 1.0L);
  for (int e = 2; e < 256; e += 2) double_factorial_[e] = double_factorial_[e - 2] * (e - 1);
  rising_.assign(kMaxVars * 128 + 1, 1.0L);
  for (std::size_t j = 1; j < rising_.size(); ++j) rising_[j] = rising_[j - 1] * (n + 2 * (j - 1));
}

// Closed form of the rational mean evaluated in long double, one rounding to double.
double MomentTable::mean(const Monomial& alpha) const {
  long double num = 1.0L;
  int half = 0;
  for (int i = 0; i < kMaxVars; ++i) {
    if (alpha[i] % 2) return 0.0;
    if (alpha[i] && i >= n_) throw Error("moment table: exponent on a missing coordinate");
    num *= double_factorial_[alpha[i]];
    half += alpha[i] / 2;
  }
  if (!std::isfinite(num) || !std::isfinite(rising_[half]))
    return static_cast<double>(domain_mean(domain_, alpha, n_));
  long double v = num / rising_[half];
  if (domain_ == Domain::Ball) v = v * n_ / (n_ + 2 * half);
  return static_cast<double>(v);
}

double MomentTable::mean(const Polynomial& p) const {
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) s += c * mean(m);
  return s;
}

}  // namespace isospec

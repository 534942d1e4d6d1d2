#pragma once

// Exact monomial integrals over the unit sphere S^{N-1} and unit ball B^N.
// Normalized moments (mean values) are rational; the total measures carry the
// transcendental factor.

#include <mutex>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "isospec/poly.hpp"

namespace isospec {

using Rational = boost::multiprecision::cpp_rational;
using RationalPolynomial = BasicPolynomial<Rational>;

enum class Domain { Sphere, Ball };

const char* domain_name(Domain d);

/// Mean of x^alpha over S^{N-1}: prod (alpha_i-1)!! / prod_{j<|alpha|/2} (N+2j), or 0 if some alpha_i is odd.
Rational sphere_mean(const Monomial& alpha, int n);
/// Mean of x^alpha over B^N: N / (|alpha|+N) times the sphere mean.
Rational ball_mean(const Monomial& alpha, int n);
Rational domain_mean(Domain d, const Monomial& alpha, int n);

double sphere_area(int n);  // |S^{N-1}|
double ball_volume(int n);  // |B^N|

/// Unnormalized integrals.
double sphere_moment(const Monomial& alpha, int n);
double ball_moment(const Monomial& alpha, int n);

/// Exact mean value of a rational polynomial.
Rational mean_value(const RationalPolynomial& p, Domain d);

/// Normalized moments in double precision, from the closed form. Thread-safe.
class MomentTable {
 public:
  MomentTable(Domain domain, int n);
  Domain domain() const { return domain_; }
  int dim() const { return n_; }
  double mean(const Monomial& alpha) const;
  /// Mean value of a double-coefficient polynomial, summed in term order.
  double mean(const Polynomial& p) const;

 private:
  Domain domain_;
  int n_;
  std::vector<long double> double_factorial_;  // (e-1)!! for even e
  std::vector<long double> rising_;            // n (n+2) ... (n+2j-2)
};

}  // namespace isospec

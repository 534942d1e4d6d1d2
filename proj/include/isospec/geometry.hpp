#pragma once

// Ambient spaces R^m+R^m+C^r and C^m+C^m with their torus actions, the
// z-valued 1-forms built from j/c maps (linear, cross-product and Hopf-lifted
// variants, optionally scaled by a radial factor), the metric fields g_lambda,
// radial potentials, and pointwise verifiers for the intertwining conditions.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isospec/jmaps.hpp"
#include "isospec/moments.hpp"
#include "isospec/poly.hpp"

namespace isospec::geometry {

// Euclidean: plain R^m without a torus (r = 0), for round-metric controls.
enum class Variant { RmRmCr, CmCm, Euclidean };
enum class Manifold { Sphere, Ball };

struct AmbientSpace {
  Variant variant = Variant::RmRmCr;
  int m = 3;  // real dimension of each factor (RmRmCr) or complex dimension (CmCm)
  int r = 2;
  Manifold manifold = Manifold::Sphere;

  int dim() const;          // N
  int factor_dim() const;   // real dimension of p (and of q)
  int manifold_dim() const; // N - 1 for spheres, N for balls
  std::vector<int> p_indices() const;
  std::vector<int> q_indices() const;
  std::vector<int> u_indices() const;
  /// Skew N x N matrix G_k with Z_k^*(x) = G_k x.
  Matrix generator(int k) const;
  /// exp(sum_k angles_k G_k).
  Matrix torus_element(const Vector& angles) const;
  Domain domain() const { return manifold == Manifold::Sphere ? Domain::Sphere : Domain::Ball; }
  std::string describe() const;
};

/// Uniform random point on the unit sphere or in the unit ball of R^N.
Vector sample_point(const AmbientSpace& amb, Rng& rng);

enum class FormKind { Linear, Cross, Hopf };
const char* form_kind_name(FormKind k);

/// Radial factor alpha(|p|^2, |q|^2, |u|^2): either a polynomial (exponent
/// triples to coefficients) or the cutoff max(0, |p|^2 + |q|^2 - s0)^power.
struct ScaleSpec {
  enum class Kind { None, Polynomial, Cutoff } kind = Kind::None;
  std::map<std::array<int, 3>, double> coefficients;
  double s0 = 0.0;
  int power = 3;

  static ScaleSpec none() { return {}; }
  static ScaleSpec product_pq();  // |p|^2 |q|^2
  static ScaleSpec cutoff(double s0, int power);
  double evaluate(double sp, double sq, double su) const;
  /// alpha(s, t, u) = alpha(t, s, u).
  bool symmetric(double tol = 1e-14) const;
  std::string describe() const;
};

/// The Hopf map P : R^4 -> R^3 and its Jacobian.
Vector hopf_map(const Vector& p);
Matrix hopf_jacobian(const Vector& p);

class AdmissibleForm {
 public:
  /// Linear: f, fp in so(m). Cross: f, fp in Sym0(R^3), m = 3. Hopf: f, fp in
  /// Sym0(R^3) on C^2 + C^2; the involutions E, E' supply the SU(2) elements A, A'.
  static AdmissibleForm linear(const AmbientSpace& amb, const jmaps::MapFamily& j, const jmaps::MapFamily& jp);
  static AdmissibleForm cross(const AmbientSpace& amb, const jmaps::MapFamily& c, const jmaps::MapFamily& cp);
  static AdmissibleForm hopf(const AmbientSpace& amb, const jmaps::MapFamily& c, const jmaps::MapFamily& cp,
                             const Matrix& e, const Matrix& ep);
  static AdmissibleForm zero(const AmbientSpace& amb);

  const AmbientSpace& ambient() const { return ambient_; }
  FormKind kind() const { return kind_; }
  int r() const { return ambient_.r; }
  bool is_zero() const { return zero_; }
  bool primed() const { return primed_; }
  const jmaps::MapFamily& first() const { return primed_ ? fp_ : f_; }   // family acting on p
  const jmaps::MapFamily& second() const { return primed_ ? f_ : fp_; }  // family acting on q
  const ScaleSpec& scale() const { return scale_; }
  /// SU(2) elements (realified 4x4) with P A = E P and P A' = E' P (Hopf only).
  const Matrix& a() const { return a_; }
  const Matrix& ap() const { return ap_; }

  /// lambda' : same data with the roles of the two families exchanged.
  AdmissibleForm prime() const;
  /// f * lambda with f = alpha(|p|^2, |q|^2, |u|^2); rejects asymmetric alpha.
  AdmissibleForm scaled(const ScaleSpec& s) const;

  /// r x N matrix whose row k is the covector lambda_k at x.
  Matrix covectors(const Vector& x) const;
  /// lambda_x(X) in z.
  Vector eval(const Vector& x, const Vector& tangent) const;
  /// Components lambda_{k,a} as polynomials in the N ambient coordinates.
  std::vector<std::vector<Polynomial>> polynomial_components() const;
  std::string describe() const;

 private:
  AmbientSpace ambient_;
  FormKind kind_ = FormKind::Linear;
  jmaps::MapFamily f_, fp_;
  Matrix a_, ap_;
  ScaleSpec scale_;
  bool primed_ = false;
  bool zero_ = false;
};

/// Covectors of the factor form nu (rows) at a factor point p.
Matrix factor_covectors(FormKind kind, const jmaps::MapFamily& f, const Vector& p);

struct MetricAt {
  Matrix lambda;     // Lambda_x = sum_k (G_k x) lambda_k(x)^T
  Matrix gram;       // (I + Lambda)^T (I + Lambda)
  Matrix gram_inv;   // (I - Lambda)(I - Lambda^T)
  double det = 1.0;  // det(I + Lambda)
};

MetricAt metric_at(const AdmissibleForm& form, const Vector& x);

/// Radial profile psi(s) = sum_i coeffs[i] s^i evaluated at s = |p_slot|^2.
struct PotentialField {
  std::vector<double> psi;
  int slot = 1;  // 1 -> p, 2 -> q

  double evaluate(const AmbientSpace& amb, const Vector& x) const;
  Polynomial polynomial(const AmbientSpace& amb) const;
  /// Requires integer-valued (or otherwise exactly representable) coefficients.
  RationalPolynomial rational_polynomial(const AmbientSpace& amb) const;
  PotentialField with_slot(int s) const { return {psi, s}; }
};

/// psi(s) = 2 - s: maximum on [0,1] exactly at 0.
PotentialField default_profile_decreasing();
/// psi(s) = 1 + s: strictly increasing in the radius.
PotentialField default_profile_increasing();

struct StarCheck {
  double residual = 0.0;               // max |mu(lambda_x X) - mu(lambda'_{Fx} F X)|
  double orthogonality_residual = 0.0; // ||F^T F - I||
  double equivariance_residual = 0.0;  // max_k ||F G_k - G_k F||
  double potential_residual = 0.0;     // max |phi(Fx) - phi(x)| if a potential was given
  bool pass = false;
};

/// Samples points of the manifold and random ambient vectors.
StarCheck check_star_condition(const AdmissibleForm& lam, const AdmissibleForm& lamp, const Vector& mu,
                               const Matrix& f, int samples, std::uint64_t seed,
                               const PotentialField* potential = nullptr, double tol = 1e-10);

/// A_mu with mu o nu = A_mu^*(mu o nu'): O(m) for linear forms, SO(3) for cross
/// forms, the SU(2) lift (realified) for Hopf forms.
Matrix a_mu(const AdmissibleForm& form, const Vector& mu);
/// F_mu = (A_mu p, A_mu^-1 q, u).
Matrix f_mu(const AdmissibleForm& form, const Vector& mu);

/// O(3) matrix E with c'(Z) = E c(Z) E^T, det +1, from matched eigenframes of
/// the two symmetric matrices (eigenvector sign: first nonzero entry positive).
Matrix matching_rotation(const Matrix& x, const Matrix& y);
/// O(m) matrix A with y = A x A^T for skew x, y with equal spectra.
Matrix matching_orthogonal_skew(const Matrix& x, const Matrix& y);

/// Primitive integer vectors with entries in [-bound, bound] (one of each +-
/// pair) followed by the basis duals.
std::vector<Vector> primitive_functionals(int r, int bound);

struct TauCheck {
  Matrix tau;
  Matrix psi;                          // induced automorphism of z
  double residual = 0.0;               // max |Psi lambda_x(X) - lambda'_{tau x}(tau X)|
  double orthogonality_residual = 0.0;
  double equivariance_residual = 0.0;  // max_k ||tau G_k - G_{Psi(k)} tau||
  double potential_residual = 0.0;     // max |phi_2(x) - phi_1(tau x)|
  bool pass = false;
};

Matrix tau_matrix(const AdmissibleForm& form);
Matrix tau_psi(const AdmissibleForm& form);
TauCheck check_tau(const AdmissibleForm& lam, int samples, std::uint64_t seed,
                   const PotentialField* potential = nullptr, double tol = 1e-10);

/// d lambda(X, Y) at x, r-vector. `fd_step` = 0 uses exact polynomial
/// derivatives; otherwise central differences with that step.
Vector curvature_two_form(const AdmissibleForm& form, const Vector& x, const Vector& xv, const Vector& yv,
                          double fd_step = 0.0);
/// Closed forms on a factor: 2<j(Z_k)X, Y> (linear) or 3<c(Z_k)p x X, Y> (cross).
Vector factor_curvature_closed_form(FormKind kind, const jmaps::MapFamily& f, const Vector& p, const Vector& xv,
                                    const Vector& yv);
/// d nu(X, Y) on a factor by central differences of factor_covectors.
Vector factor_curvature_fd(FormKind kind, const jmaps::MapFamily& f, const Vector& p, const Vector& xv,
                           const Vector& yv, double h);

}  // namespace isospec::geometry

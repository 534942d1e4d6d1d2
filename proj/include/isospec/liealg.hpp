#pragma once

// Matrix Lie algebras so(m), su(m) and the space Sym0(R^3), their brackets,
// centralizers and conjugacy invariants, plus the quaternion double cover
// SU(2) -> SO(3).

#include <optional>
#include <string>
#include <vector>

#include "isospec/numkit.hpp"

namespace isospec::liealg {

enum class Algebra { SO, SU, Sym0 };

const char* algebra_name(Algebra a);
Algebra parse_algebra(const std::string& s);

/// E_ab (a < b) with +1 at (a,b), -1 at (b,a), ordered (0,1), (0,2), ..., (m-2,m-1).
std::vector<Matrix> so_basis(int m);
/// Orthonormal for -Re tr(XY): (E_ab - E_ba)/sqrt2, i(E_ab + E_ba)/sqrt2, then
/// i * diag(1,..,1,-k,0,..)/sqrt(k(k+1)) for k = 1..m-1.
std::vector<CMatrix> su_basis(int m);

Matrix bracket(const Matrix& x, const Matrix& y);
CMatrix bracket(const CMatrix& x, const CMatrix& y);

bool is_skew(const Matrix& x, double tol = 0.0);
bool is_skew_hermitian(const CMatrix& x, double tol = 1e-12);

/// Dimension of {X in so(m) : [X, t] = 0 for every target}. Targets may be skew
/// or symmetric (Sym0 data is acted on by so(3)).
int centralizer_dim(const std::vector<Matrix>& targets, double tol = 1e-10);
/// Same for su(m).
int centralizer_dim(const std::vector<CMatrix>& targets, double tol = 1e-10);

struct OrbitInvariants {
  std::vector<Complex> char_poly;  // det(tI - x), descending, leading 1
  std::optional<double> pfaffian;  // so(m), m even
};

/// Faddeev-LeVerrier characteristic polynomial.
std::vector<Complex> char_poly(const CMatrix& x);
OrbitInvariants orbit_invariants(const Matrix& x, bool skew);
OrbitInvariants orbit_invariants(const CMatrix& x);
/// Max coefficientwise distance between invariants; pfaffians compared when both present.
double invariant_distance(const OrbitInvariants& a, const OrbitInvariants& b);

enum class Conjugacy { Conjugate, NotConjugate, Inconclusive };
const char* conjugacy_name(Conjugacy c);

/// Char-poly (plus Pfaffian for even so(m)) comparison. Degenerate skew
/// matrices of even size (repeated or zero eigenvalues) yield Inconclusive when
/// the char polys agree.
Conjugacy conjugacy_test(const Matrix& x, const Matrix& y, bool skew, double tol);
Conjugacy conjugacy_test(const CMatrix& x, const CMatrix& y, double tol);

struct UnitQuaternion {
  double w = 1, x = 0, y = 0, z = 0;
  double norm() const;
};

Matrix quaternion_to_so3(const UnitQuaternion& q);
/// Inverse of quaternion_to_so3 with w >= 0; ties (w = 0) resolved by making
/// the first nonzero of (x, y, z) positive. Throws if e is not in SO(3).
UnitQuaternion so3_lift(const Matrix& e);
/// w I - i (x sigma_z + y sigma_x + z sigma_y), the SU(2) element matching the
/// Hopf map convention of the geometry module.
CMatrix su2_action_on_c2(const UnitQuaternion& q);

/// Realification C^n -> R^{2n} with basis (e1, i e1, e2, i e2, ...).
Matrix realify(const CMatrix& a);

}  // namespace isospec::liealg

#include "isospec/liealg.hpp"

#include <algorithm>
#include <cmath>

namespace isospec::liealg {

const char* algebra_name(Algebra a) {
  switch (a) {
    case Algebra::SO: return "so";
    case Algebra::SU: return "su";
    case Algebra::Sym0: return "sym0";
  }
  return "?";
}

Algebra parse_algebra(const std::string& s) {
  if (s == "so") return Algebra::SO;
  if (s == "su") return Algebra::SU;
  if (s == "sym0") return Algebra::Sym0;
  throw Error("unknown algebra '" + s + "'");
}

std::vector<Matrix> so_basis(int m) {
  std::vector<Matrix> out;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      Matrix e = Matrix::Zero(m, m);
      e(a, b) = 1.0;
      e(b, a) = -1.0;
      out.push_back(e);
    }
  return out;
}

std::vector<CMatrix> su_basis(int m) {
  std::vector<CMatrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      CMatrix e = CMatrix::Zero(m, m);
      e(a, b) = s;
      e(b, a) = -s;
      out.push_back(e);
      CMatrix f = CMatrix::Zero(m, m);
      f(a, b) = i * s;
      f(b, a) = i * s;
      out.push_back(f);
    }
  for (int k = 1; k < m; ++k) {
    CMatrix d = CMatrix::Zero(m, m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int a = 0; a < k; ++a) d(a, a) = i * norm;
    d(k, k) = -i * (k * norm);
    out.push_back(d);
  }
  return out;
}

Matrix bracket(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw Error("bracket: dimension mismatch");
  return x * y - y * x;
}

CMatrix bracket(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw Error("bracket: dimension mismatch");
  return x * y - y * x;
}

bool is_skew(const Matrix& x, double tol) {
  return x.rows() == x.cols() && (x + x.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_skew_hermitian(const CMatrix& x, double tol) {
  return x.rows() == x.cols() && (x + x.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

int centralizer_dim(const std::vector<Matrix>& targets, double tol) {
  if (targets.empty()) throw Error("centralizer_dim: no targets");
  const Eigen::Index m = targets.front().rows();
  const auto basis = so_basis(static_cast<int>(m));
  Matrix rows(m * m * static_cast<Eigen::Index>(targets.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    Eigen::Index off = 0;
    for (const Matrix& t : targets) {
      if (t.rows() != m || t.cols() != m) throw Error("centralizer_dim: dimension mismatch");
      const Matrix c = bracket(basis[b], t);
      rows.col(b).segment(off, m * m) = Eigen::Map<const Vector>(c.data(), m * m);
      off += m * m;
    }
  }
  return static_cast<int>(numkit::nullspace_dim(rows, tol));
}

int centralizer_dim(const std::vector<CMatrix>& targets, double tol) {
  if (targets.empty()) throw Error("centralizer_dim: no targets");
  const Eigen::Index m = targets.front().rows();
  const auto basis = su_basis(static_cast<int>(m));
  const Eigen::Index block = 2 * m * m;
  Matrix rows(block * static_cast<Eigen::Index>(targets.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    Eigen::Index off = 0;
    for (const CMatrix& t : targets) {
      if (t.rows() != m || t.cols() != m) throw Error("centralizer_dim: dimension mismatch");
      const CMatrix c = bracket(basis[b], t);
      for (Eigen::Index k = 0; k < m * m; ++k) {
        rows(off + 2 * k, b) = c(k % m, k / m).real();
        rows(off + 2 * k + 1, b) = c(k % m, k / m).imag();
      }
      off += block;
    }
  }
  return static_cast<int>(numkit::nullspace_dim(rows, tol));
}

std::vector<Complex> char_poly(const CMatrix& x) {
  const Eigen::Index n = x.rows();
  if (x.cols() != n) throw Error("char_poly: not square");
  std::vector<Complex> c(n + 1);
  c[0] = 1.0;
  CMatrix mk = CMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = x * mk;
    mk.diagonal().array() += c[k - 1];
    c[k] = -(x * mk).trace() / static_cast<double>(k);
  }
  return c;
}

OrbitInvariants orbit_invariants(const Matrix& x, bool skew) {
  OrbitInvariants inv;
  inv.char_poly = char_poly(x.cast<Complex>());
  if (skew && x.rows() % 2 == 0) inv.pfaffian = numkit::pfaffian(x);
  return inv;
}

OrbitInvariants orbit_invariants(const CMatrix& x) {
  OrbitInvariants inv;
  inv.char_poly = char_poly(x);
  return inv;
}

double invariant_distance(const OrbitInvariants& a, const OrbitInvariants& b) {
  if (a.char_poly.size() != b.char_poly.size()) throw Error("invariant_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.char_poly.size(); ++i) d = std::max(d, std::abs(a.char_poly[i] - b.char_poly[i]));
  if (a.pfaffian && b.pfaffian) d = std::max(d, std::abs(*a.pfaffian - *b.pfaffian));
  return d;
}

const char* conjugacy_name(Conjugacy c) {
  switch (c) {
    case Conjugacy::Conjugate: return "conjugate";
    case Conjugacy::NotConjugate: return "not-conjugate";
    case Conjugacy::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

bool degenerate_skew(const Matrix& x, double tol) {
  // Eigenvalues of a real skew matrix are +-i*theta; look at theta^2 = eig(-x^2).
  const Matrix s = -(x * x);
  auto ev = numkit::sym_eigenvalues(numkit::SymmetricMatrix::from_dense(0.5 * (s + s.transpose())));
  const double scale = std::max(1.0, std::abs(ev.back()));
  // Each nonzero theta^2 appears twice; count distinct clusters.
  for (double v : ev)
    if (std::abs(v) <= tol * scale) return true;
  for (std::size_t i = 0; i + 2 < ev.size(); ++i)
    if (std::abs(ev[i + 2] - ev[i]) <= tol * scale) return true;
  return false;
}

}  // namespace

Conjugacy conjugacy_test(const Matrix& x, const Matrix& y, bool skew, double tol) {
  const double d = invariant_distance(orbit_invariants(x, skew), orbit_invariants(y, skew));
  if (d > tol) return Conjugacy::NotConjugate;
  if (skew && x.rows() % 2 == 0 && degenerate_skew(x, std::sqrt(tol))) return Conjugacy::Inconclusive;
  return Conjugacy::Conjugate;
}

Conjugacy conjugacy_test(const CMatrix& x, const CMatrix& y, double tol) {
  // Skew-Hermitian matrices are normal, so equal char polys mean unitary conjugacy.
  const double d = invariant_distance(orbit_invariants(x), orbit_invariants(y));
  return d > tol ? Conjugacy::NotConjugate : Conjugacy::Conjugate;
}

double UnitQuaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Matrix quaternion_to_so3(const UnitQuaternion& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Matrix r(3, 3);
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

UnitQuaternion so3_lift(const Matrix& e) {
  if (e.rows() != 3 || e.cols() != 3) throw Error("so3_lift: expected a 3x3 matrix");
  if ((e.transpose() * e - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(e.determinant() - 1.0) > 1e-10)
    throw Error("so3_lift: input is not special orthogonal");
  // Shepperd: pivot on the largest of the four squared components.
  const double tr = e.trace();
  const double c[4] = {1 + tr, 1 + 2 * e(0, 0) - tr, 1 + 2 * e(1, 1) - tr, 1 + 2 * e(2, 2) - tr};
  const int k = static_cast<int>(std::max_element(c, c + 4) - c);
  const double s = 2.0 * std::sqrt(c[k]);
  UnitQuaternion q;
  switch (k) {
    case 0:
      q = {0.25 * s, (e(2, 1) - e(1, 2)) / s, (e(0, 2) - e(2, 0)) / s, (e(1, 0) - e(0, 1)) / s};
      break;
    case 1:
      q = {(e(2, 1) - e(1, 2)) / s, 0.25 * s, (e(0, 1) + e(1, 0)) / s, (e(0, 2) + e(2, 0)) / s};
      break;
    case 2:
      q = {(e(0, 2) - e(2, 0)) / s, (e(0, 1) + e(1, 0)) / s, 0.25 * s, (e(1, 2) + e(2, 1)) / s};
      break;
    default:
      q = {(e(1, 0) - e(0, 1)) / s, (e(0, 2) + e(2, 0)) / s, (e(1, 2) + e(2, 1)) / s, 0.25 * s};
  }
  const double n = q.norm();
  q = {q.w / n, q.x / n, q.y / n, q.z / n};
  // Rotations by pi have w at rounding level; snap it so the tie rule applies.
  if (std::abs(q.w) < 1e-14) q.w = 0.0;
  bool flip = q.w < 0;
  if (q.w == 0.0) {
    const double first = q.x != 0.0 ? q.x : (q.y != 0.0 ? q.y : q.z);
    flip = first < 0;
  }
  if (flip) q = {-q.w, -q.x, -q.y, -q.z};
  return q;
}

CMatrix su2_action_on_c2(const UnitQuaternion& q) {
  const Complex i(0.0, 1.0);
  CMatrix a(2, 2);
  a << q.w - i * q.x, -q.z - i * q.y, q.z - i * q.y, q.w + i * q.x;
  return a;
}

Matrix realify(const CMatrix& a) {
  Matrix r(2 * a.rows(), 2 * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double re = a(i, j).real(), im = a(i, j).imag();
      r(2 * i, 2 * j) = re;
      r(2 * i, 2 * j + 1) = -im;
      r(2 * i + 1, 2 * j) = im;
      r(2 * i + 1, 2 * j + 1) = re;
    }
  return r;
}

}  // namespace isospec::liealg

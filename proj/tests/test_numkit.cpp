#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "isospec/numkit.hpp"

using namespace isospec;
using numkit::SymmetricMatrix;

namespace {

Matrix random_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g = numkit::gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.transpose());
}

// Characteristic polynomial in long double, then companion-matrix roots
// polished by Newton: an eigensolver-independent route to the spectrum.
std::vector<double> charpoly_roots(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix al = a.cast<long double>();
  std::vector<long double> c(n + 1, 0.0L);  // det(tI - A) = sum c[k] t^(n-k)
  c[0] = 1.0L;
  LMatrix m = LMatrix::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = al * m + c[k - 1] * LMatrix::Identity(n, n);
    c[k] = -(al * m).trace() / k;
  }
  Matrix comp = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) comp(0, k) = -static_cast<double>(c[k + 1]);
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  Eigen::EigenSolver<Matrix> es(comp);
  std::vector<double> roots;
  for (int k = 0; k < n; ++k) {
    long double t = es.eigenvalues()(k).real();
    for (int it = 0; it < 50; ++it) {
      long double p = c[0], dp = 0.0L;
      for (int j = 1; j <= n; ++j) {
        dp = dp * t + p;
        p = p * t + c[j];
      }
      if (dp == 0.0L) break;
      t -= p / dp;
    }
    roots.push_back(static_cast<double>(t));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

TEST_CASE("sym_eigen on diagonal and swap matrices") {
  const auto d = numkit::sym_eigen(SymmetricMatrix::diagonal({3, 1, 2}));
  CHECK(d.values(0) == doctest::Approx(1));
  CHECK(d.values(1) == doctest::Approx(2));
  CHECK(d.values(2) == doctest::Approx(3));
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  const auto e = numkit::sym_eigenvalues(SymmetricMatrix::from_dense(s));
  CHECK(e[0] == doctest::Approx(-1).epsilon(1e-15));
  CHECK(e[1] == doctest::Approx(1).epsilon(1e-15));
}

TEST_CASE("sym_eigen matches characteristic polynomial roots") {
  const Matrix a = random_symmetric(8, 1);
  const auto mine = numkit::sym_eigenvalues(SymmetricMatrix::from_dense(a));
  const auto roots = charpoly_roots(a);
  REQUIRE(mine.size() == roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(mine[i] - roots[i]) <= 1e-10);
}

TEST_CASE("sym_eigen vectors diagonalize the input") {
  const Matrix a = random_symmetric(12, 4);
  const auto d = numkit::sym_eigen(SymmetricMatrix::from_dense(a));
  const Matrix& v = d.vectors;
  CHECK((v.transpose() * v - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((a * v - v * d.values.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sym_eigen rejects non-finite input") {
  Matrix a = Matrix::Identity(3, 3);
  a(1, 1) = std::nan("");
  CHECK_THROWS_AS(numkit::sym_eigen(SymmetricMatrix::from_dense(a)), Error);
}

TEST_CASE("pencil_eigen: decoupled, identity mass and deflation") {
  const auto p = numkit::pencil_eigen(SymmetricMatrix::diagonal({2, 8}), SymmetricMatrix::diagonal({1, 2}));
  REQUIRE(p.eigenvalues.size() == 2);
  CHECK(p.eigenvalues[0] == doctest::Approx(2));
  CHECK(p.eigenvalues[1] == doctest::Approx(4));

  const auto k = SymmetricMatrix::from_dense(random_symmetric(6, 2));
  const auto direct = numkit::sym_eigenvalues(k);
  const auto pencil = numkit::pencil_eigen(k, SymmetricMatrix::identity(6)).eigenvalues;
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(std::abs(direct[i] - pencil[i]) <= 1e-12);

  const auto defl = numkit::pencil_eigen(SymmetricMatrix::diagonal({1, 1, 5}), SymmetricMatrix::diagonal({1, 1, 0}));
  CHECK(defl.eigenvalues.size() == 2);
  CHECK(defl.eigenvalues[0] == doctest::Approx(1));
  CHECK(defl.eigenvalues[1] == doctest::Approx(1));
}

TEST_CASE("pencil_eigen rejects an indefinite mass") {
  CHECK_THROWS_AS(numkit::pencil_eigen(SymmetricMatrix::identity(2), SymmetricMatrix::diagonal({1, -1})), Error);
}

TEST_CASE("pencil_eigen agrees with Eigen's generalized solver") {
  const Matrix k = random_symmetric(10, 3);
  Rng rng(9);
  const Matrix b = numkit::gaussian_matrix(10, 10, rng);
  Matrix m = b * b.transpose() + Matrix::Identity(10, 10);
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ref(k, m);
  const auto mine = numkit::pencil_eigen(SymmetricMatrix::from_dense(k), SymmetricMatrix::from_dense(m));
  for (int i = 0; i < 10; ++i) CHECK(std::abs(mine.eigenvalues[i] - ref.eigenvalues()(i)) <= 1e-10);
}

TEST_CASE("nullspace_dim") {
  CHECK(numkit::nullspace_dim(Matrix::Zero(3, 3), 1e-12) == 3);
  CHECK(numkit::nullspace_dim(Matrix::Identity(3, 3), 1e-12) == 0);
  Matrix r(2, 2);
  r << 1, 2, 2, 4;
  CHECK(numkit::nullspace_dim(r, 1e-12) == 1);
  const Matrix basis = numkit::nullspace_basis(r, 1e-12);
  CHECK((r * basis).norm() <= 1e-14);
}

TEST_CASE("jacobi_svd matches Eigen's singular values") {
  Rng rng(5);
  const Matrix a = numkit::gaussian_matrix(7, 5, rng);
  const auto mine = numkit::jacobi_svd(a);
  Eigen::JacobiSVD<Matrix> ref(a);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(mine.singular_values(i) - ref.singularValues()(i)) <= 1e-12);
}

TEST_CASE("Haar samplers") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix q1 = numkit::haar_orthogonal(1, rng);
    CHECK(std::abs(std::abs(q1(0, 0)) - 1.0) <= 1e-15);
  }
  const Matrix q = numkit::haar_orthogonal(9, rng);
  CHECK((q.transpose() * q - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-12);
  const Matrix s = numkit::haar_special_orthogonal(6, std::uint64_t{3});
  CHECK(s.determinant() == doctest::Approx(1.0));
  const CMatrix u = numkit::haar_special_unitary(4, rng);
  CHECK((u.adjoint() * u - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(u.determinant() - Complex(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("pfaffian squares to the determinant") {
  Matrix two(2, 2);
  two << 0, 3, -3, 0;
  CHECK(numkit::pfaffian(two) == doctest::Approx(3));
  Matrix four = Matrix::Zero(4, 4);
  const double a = 1, b = 2, c = 3, d = 4, e = 5, f = 6;  // a=(01) b=(02) c=(03) d=(12) e=(13) f=(23)
  four(0, 1) = a, four(0, 2) = b, four(0, 3) = c, four(1, 2) = d, four(1, 3) = e, four(2, 3) = f;
  four -= Matrix(four.transpose());
  CHECK(numkit::pfaffian(four) == doctest::Approx(a * f - b * e + c * d));
  Rng rng(2);
  Matrix g = numkit::gaussian_matrix(6, 6, rng);
  const Matrix skew = g - g.transpose();
  const double pf = numkit::pfaffian(skew);
  CHECK(pf * pf == doctest::Approx(skew.determinant()).epsilon(1e-10));
}

TEST_CASE("hermitian_eigenvalues matches Eigen") {
  Rng rng(8);
  const Matrix re = numkit::gaussian_matrix(5, 5, rng), im = numkit::gaussian_matrix(5, 5, rng);
  CMatrix h = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  h = (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> ref(h);
  const auto mine = numkit::hermitian_eigenvalues(h);
  REQUIRE(mine.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(mine[i] - ref.eigenvalues()(i)) <= 1e-12);
}

TEST_CASE("SymmetricMatrix storage and congruence") {
  const Matrix a = random_symmetric(5, 6);
  SymmetricMatrix s = SymmetricMatrix::from_dense(a);
  s.set(1, 3, 7.0);
  CHECK(s(3, 1) == 7.0);
  Rng rng(1);
  const Matrix t = numkit::gaussian_matrix(5, 3, rng);
  const Matrix dense = s.dense();
  CHECK((s.congruence(t).dense() - t.transpose() * dense * t).cwiseAbs().maxCoeff() <= 1e-12);
  Matrix asym = a;
  asym(0, 1) += 1.0;
  CHECK_THROWS_AS(SymmetricMatrix::from_dense(asym, 1e-12), Error);
}

TEST_CASE("derive_seed separates streams deterministically") {
  CHECK(numkit::derive_seed(7, 1) == numkit::derive_seed(7, 1));
  CHECK(numkit::derive_seed(7, 1) != numkit::derive_seed(7, 2));
  CHECK(numkit::derive_seed(7, 1) != numkit::derive_seed(8, 1));
}

TEST_CASE("pencil spectra are invariant under congruence by an invertible matrix") {
  const Matrix k = random_symmetric(12, 21);
  Rng rng(22);
  const Matrix b = numkit::gaussian_matrix(12, 12, rng);
  Matrix m = b * b.transpose() + Matrix::Identity(12, 12);
  m = 0.5 * (m + m.transpose()).eval();
  const Matrix s = numkit::gaussian_matrix(12, 12, rng) + 4.0 * Matrix::Identity(12, 12);
  const auto sk = SymmetricMatrix::from_dense(k), sm = SymmetricMatrix::from_dense(m);
  const auto a = numkit::pencil_eigen(sk, sm).eigenvalues;
  const auto c = numkit::pencil_eigen(sk.congruence(s), sm.congruence(s)).eigenvalues;
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - c[i]) <= 1e-8 * std::max(1.0, std::abs(a[i])));
}

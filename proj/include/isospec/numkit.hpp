#pragma once

// Dense linear algebra used throughout the library: cyclic Jacobi eigensolvers,
// symmetric-definite pencils with kernel deflation, one-sided Jacobi SVD,
// Pfaffians and Haar sampling. Eigen provides the matrix containers only.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace isospec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace numkit {

inline constexpr double kDefaultDeflation = 1e-10;

/// Real symmetric matrix with packed upper-triangular storage, so
/// `(i, j)` and `(j, i)` always alias the same entry.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t dim);

  /// Accepts `a` if |a - a^T| <= tol * (1 + |a|) entrywise; stores the average.
  static SymmetricMatrix from_dense(const Matrix& a, double tol = 0.0);
  static SymmetricMatrix identity(std::size_t dim);
  static SymmetricMatrix diagonal(const std::vector<double>& d);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { data_[index(i, j)] = v; }
  void add(std::size_t i, std::size_t j, double v) { data_[index(i, j)] += v; }

  Matrix dense() const;
  double frobenius_norm() const;
  bool all_finite() const;

  SymmetricMatrix& operator+=(const SymmetricMatrix& o);
  SymmetricMatrix& operator*=(double s);
  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }

  /// S^T A S for a square or rectangular S.
  SymmetricMatrix congruence(const Matrix& s) const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * dim_ - i * (i + 1) / 2 + j;
  }
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(i) belongs to values(i)
};

/// Cyclic Jacobi. Throws on non-finite input.
EigenDecomposition sym_eigen(const SymmetricMatrix& a);
std::vector<double> sym_eigenvalues(const SymmetricMatrix& a);

struct PencilSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::size_t deflated_dim = 0;
  double deflation_tolerance = kDefaultDeflation;
};

/// Eigenvalues of K restricted to the M-positive subspace: eigenvectors of M with
/// eigenvalue <= deflate_tol * lambda_max(M) are dropped, the rest is whitened
/// and the reduced standard problem solved.
PencilSpectrum pencil_eigen(const SymmetricMatrix& k, const SymmetricMatrix& m,
                            double deflate_tol = kDefaultDeflation);

/// Eigenvalues (ascending) of a Hermitian matrix via its real symmetric realification.
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

struct SvdResult {
  Vector singular_values;  // descending
  Matrix v;                // right singular vectors as columns
};

/// One-sided (Hestenes) Jacobi SVD; accurate small singular values.
SvdResult jacobi_svd(const Matrix& a);

/// Number of singular values <= tol * sigma_max (zero matrix -> column count).
std::size_t nullspace_dim(const Matrix& rows, double tol);
/// Orthonormal basis (columns) of the numerical nullspace.
Matrix nullspace_basis(const Matrix& rows, double tol);

double pfaffian(const Matrix& skew);

Matrix gaussian_matrix(int rows, int cols, Rng& rng);
Matrix haar_orthogonal(int dim, Rng& rng);
Matrix haar_orthogonal(int dim, std::uint64_t seed);
/// det = +1 by flipping the first column when needed.
Matrix haar_special_orthogonal(int dim, Rng& rng);
Matrix haar_special_orthogonal(int dim, std::uint64_t seed);
CMatrix haar_unitary(int dim, Rng& rng);
CMatrix haar_special_unitary(int dim, Rng& rng);

/// Maps a seed and a task index to an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace numkit
}  // namespace isospec

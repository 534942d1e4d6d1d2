#include "isospec/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isospec::numkit {

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

SymmetricMatrix SymmetricMatrix::from_dense(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw Error("SymmetricMatrix: matrix is not square");
  const auto n = static_cast<std::size_t>(a.rows());
  SymmetricMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double x = a(i, j), y = a(j, i);
      if (std::abs(x - y) > tol * (1.0 + std::max(std::abs(x), std::abs(y))))
        throw Error("SymmetricMatrix: input is not symmetric");
      s.set(i, j, i == j ? x : 0.5 * (x + y));
    }
  }
  return s;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
  SymmetricMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i) s.set(i, i, 1.0);
  return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  SymmetricMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

Matrix SymmetricMatrix::dense() const {
  Matrix a(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) a(i, j) = a(j, i) = (*this)(i, j);
  return a;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) {
      const double v = (*this)(i, j);
      s += (i == j ? 1.0 : 2.0) * v * v;
    }
  return std::sqrt(s);
}

bool SymmetricMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& o) {
  if (o.dim_ != dim_) throw Error("SymmetricMatrix: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

SymmetricMatrix SymmetricMatrix::congruence(const Matrix& s) const {
  if (static_cast<std::size_t>(s.rows()) != dim_) throw Error("congruence: dimension mismatch");
  const Matrix r = s.transpose() * dense() * s;
  SymmetricMatrix out(static_cast<std::size_t>(r.rows()));
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = i; j < r.cols(); ++j) out.set(i, j, 0.5 * (r(i, j) + r(j, i)));
  return out;
}

namespace {

// Rotations are applied in a fixed (p, q) order, so results are reproducible.
void jacobi_in_place(Matrix& a, Matrix* v) {
  const Eigen::Index n = a.rows();
  if (v) v->setIdentity(n, n);
  const double scale = a.norm();
  if (scale == 0.0 || n < 2) return;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-17 * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        if (v) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const double vkp = (*v)(k, p), vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - s * vkq;
            (*v)(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
}

std::vector<Eigen::Index> ascending_order(const Vector& d) {
  std::vector<Eigen::Index> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return d(x) < d(y); });
  return idx;
}

}  // namespace

EigenDecomposition sym_eigen(const SymmetricMatrix& a) {
  if (!a.all_finite()) throw Error("sym_eigen: non-finite input");
  Matrix w = a.dense();
  Matrix v;
  jacobi_in_place(w, &v);
  const Vector d = w.diagonal();
  const auto order = ascending_order(d);
  EigenDecomposition out;
  out.values.resize(d.size());
  out.vectors.resize(v.rows(), v.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.values(i) = d(order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

std::vector<double> sym_eigenvalues(const SymmetricMatrix& a) {
  if (!a.all_finite()) throw Error("sym_eigen: non-finite input");
  Matrix w = a.dense();
  jacobi_in_place(w, nullptr);
  std::vector<double> d(w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) d[i] = w(i, i);
  std::sort(d.begin(), d.end());
  return d;
}

PencilSpectrum pencil_eigen(const SymmetricMatrix& k, const SymmetricMatrix& m, double deflate_tol) {
  if (k.dim() != m.dim()) throw Error("pencil_eigen: dimension mismatch");
  const EigenDecomposition em = sym_eigen(m);
  const Eigen::Index n = em.values.size();
  PencilSpectrum out;
  out.deflation_tolerance = deflate_tol;
  if (n == 0) return out;
  const double lmax = em.values(n - 1);
  if (lmax <= 0.0) {
    if (em.values(0) < 0.0) throw Error("mass not PSD");
    return out;
  }
  if (em.values(0) < -deflate_tol * lmax) throw Error("mass not PSD");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (em.values(i) > deflate_tol * lmax) keep.push_back(i);
  Matrix b(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    b.col(c) = em.vectors.col(keep[c]) / std::sqrt(em.values(keep[c]));
  out.deflated_dim = keep.size();
  out.eigenvalues = sym_eigenvalues(k.congruence(b));
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  if (h.cols() != n) throw Error("hermitian_eigenvalues: not square");
  Matrix r(2 * n, 2 * n);
  const Matrix re = 0.5 * (h.real() + h.real().transpose());
  const Matrix im = 0.5 * (h.imag() - h.imag().transpose());
  r << re, -im, im, re;
  std::vector<double> d = sym_eigenvalues(SymmetricMatrix::from_dense(r));
  // Realification doubles every eigenvalue.
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < d.size(); i += 2) out.push_back(0.5 * (d[i] + d[i + 1]));
  return out;
}

SvdResult jacobi_svd(const Matrix& a) {
  if (!a.allFinite()) throw Error("jacobi_svd: non-finite input");
  Matrix u = a;
  const Eigen::Index n = a.cols();
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = u.col(p).squaredNorm();
        const double beta = u.col(q).squaredNorm();
        const double gamma = u.col(p).dot(u.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= 1e-16 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index k = 0; k < u.rows(); ++k) {
          const double x = u(k, p), y = u(k, q);
          u(k, p) = c * x - s * y;
          u(k, q) = s * x + c * y;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double x = v(k, p), y = v(k, q);
          v(k, p) = c * x - s * y;
          v(k, q) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  Vector sigma(n);
  for (Eigen::Index j = 0; j < n; ++j) sigma(j) = u.col(j).norm();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return sigma(x) > sigma(y); });
  SvdResult out;
  out.singular_values.resize(n);
  out.v.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.singular_values(j) = sigma(idx[j]);
    out.v.col(j) = v.col(idx[j]);
  }
  return out;
}

std::size_t nullspace_dim(const Matrix& rows, double tol) {
  if (rows.cols() == 0) return 0;
  const SvdResult s = jacobi_svd(rows);
  const double smax = s.singular_values(0);
  if (smax == 0.0) return static_cast<std::size_t>(rows.cols());
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < s.singular_values.size(); ++j)
    if (s.singular_values(j) <= tol * smax) ++count;
  return count;
}

Matrix nullspace_basis(const Matrix& rows, double tol) {
  const Eigen::Index n = rows.cols();
  if (n == 0) return Matrix(0, 0);
  const SvdResult s = jacobi_svd(rows);
  const double smax = s.singular_values(0);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < n; ++j)
    if (smax == 0.0 || s.singular_values(j) <= tol * smax) cols.push_back(j);
  Matrix basis(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) basis.col(c) = s.v.col(cols[c]);
  return basis;
}

double pfaffian(const Matrix& skew) {
  const Eigen::Index n = skew.rows();
  if (skew.cols() != n) throw Error("pfaffian: not square");
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  Matrix a = skew;
  double pf = 1.0;
  for (Eigen::Index k = 0; k < n - 1; k += 2) {
    Eigen::Index kp = k + 1;
    for (Eigen::Index i = k + 2; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(kp, k))) kp = i;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      const Vector tau = a.row(k).segment(k + 2, rest).transpose() / a(k, k + 1);
      const Vector col = a.col(k + 1).segment(k + 2, rest);
      a.block(k + 2, k + 2, rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = normal(rng);
  return g;
}

namespace {

// Modified Gram-Schmidt, applied twice. Positive diagonal of R makes the
// result Haar distributed.
template <class M>
M orthonormalize_columns(M q) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
      q.col(j).normalize();
    }
  }
  return q;
}

}  // namespace

Matrix haar_orthogonal(int dim, Rng& rng) {
  if (dim < 1) throw Error("haar_orthogonal: dim must be >= 1");
  return orthonormalize_columns(gaussian_matrix(dim, dim, rng));
}

Matrix haar_orthogonal(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_orthogonal(dim, rng);
}

Matrix haar_special_orthogonal(int dim, Rng& rng) {
  Matrix q = haar_orthogonal(dim, rng);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

Matrix haar_special_orthogonal(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_special_orthogonal(dim, rng);
}

CMatrix haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error("haar_unitary: dim must be >= 1");
  const Matrix re = gaussian_matrix(dim, dim, rng);
  const Matrix im = gaussian_matrix(dim, dim, rng);
  CMatrix z(dim, dim);
  z.real() = re;
  z.imag() = im;
  return orthonormalize_columns(z);
}

CMatrix haar_special_unitary(int dim, Rng& rng) {
  CMatrix u = haar_unitary(dim, rng);
  const Complex det = u.determinant();
  const Complex root = std::polar(1.0, -std::arg(det) / dim);
  return u * root;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined word
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace isospec::numkit

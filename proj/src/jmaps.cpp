#include "isospec/jmaps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace isospec::jmaps {

using liealg::Algebra;

Matrix MapFamily::at(const Vector& z) const {
  if (is_complex()) throw Error("MapFamily::at: complex family");
  if (z.size() != r()) throw Error("MapFamily::at: wrong z dimension");
  Matrix x = Matrix::Zero(m, m);
  for (int k = 0; k < r(); ++k) x += z(k) * images[k];
  return x;
}

CMatrix MapFamily::cat(const Vector& z) const {
  if (z.size() != r()) throw Error("MapFamily::cat: wrong z dimension");
  CMatrix x = CMatrix::Zero(m, m);
  for (int k = 0; k < r(); ++k) x += z(k) * (is_complex() ? cimages[k] : images[k].cast<Complex>());
  return x;
}

void MapFamily::validate(double tol) const {
  if (r() < 1) throw Error("family: needs at least one image");
  for (int k = 0; k < r(); ++k) {
    if (is_complex()) {
      const CMatrix& x = cimages[k];
      if (x.rows() != m || x.cols() != m) throw Error("family: image has wrong size");
      if (!liealg::is_skew_hermitian(x, tol) || std::abs(x.trace()) > tol)
        throw Error("family: image not in su(m)");
    } else {
      const Matrix& x = images[k];
      if (x.rows() != m || x.cols() != m) throw Error("family: image has wrong size");
      if (algebra == Algebra::SO && !liealg::is_skew(x, tol)) throw Error("family: image not in so(m)");
      if (algebra == Algebra::Sym0 &&
          ((x - x.transpose()).cwiseAbs().maxCoeff() > tol || std::abs(x.trace()) > tol))
        throw Error("family: image not symmetric traceless");
    }
  }
}

MapFamily make_real_family(Algebra a, std::vector<Matrix> images) {
  if (a == Algebra::SU) throw Error("make_real_family: su needs complex images");
  if (images.empty()) throw Error("make_real_family: no images");
  MapFamily f;
  f.algebra = a;
  f.m = static_cast<int>(images.front().rows());
  f.images = std::move(images);
  f.validate(1e-12);
  return f;
}

MapFamily make_su_family(std::vector<CMatrix> images) {
  if (images.empty()) throw Error("make_su_family: no images");
  MapFamily f;
  f.algebra = Algebra::SU;
  f.m = static_cast<int>(images.front().rows());
  f.cimages = std::move(images);
  f.validate(1e-12);
  return f;
}

PaperCData paper_cmaps() {
  const double h = 1.0 / std::sqrt(2.0);
  Matrix c1(3, 3), c2(3, 3), c2p(3, 3), e(3, 3), ep(3, 3);
  c1 << -1, 0, 0, 0, 0, 0, 0, 0, 1;
  c2 << 0, h, 0, h, 0, h, 0, h, 0;
  c2p << 0, 0, 1, 0, 0, 0, 1, 0, 0;
  e << 0.5, -h, 0.5, -h, 0, h, 0.5, h, 0.5;
  ep << -h, 0, h, 0, -1, 0, h, 0, h;
  PaperCData d;
  d.c = make_real_family(Algebra::Sym0, {c1, c2});
  d.cp = make_real_family(Algebra::Sym0, {c1, c2p});
  d.e = e;
  d.ep = ep;
  return d;
}

MapFamily perturb_second_image(const MapFamily& f, double eps) {
  if (f.is_complex() || f.r() < 2 || f.m < 3) throw Error("perturb_second_image: unsupported family");
  MapFamily g = f;
  g.images[1](0, 2) += eps;
  g.images[1](2, 0) += (f.algebra == Algebra::SO ? -eps : eps);
  return g;
}

std::vector<std::vector<Complex>> coefficient_polynomials(const MapFamily& f) {
  if (f.r() != 2) throw Error("coefficient_polynomials: requires r = 2");
  const int m = f.m;
  const int samples = 2 * m + 4;
  std::vector<std::vector<Complex>> values(samples);
  for (int s = 0; s < samples; ++s) {
    const double th = std::numbers::pi * s / samples;
    Vector z(2);
    z << std::cos(th), std::sin(th);
    values[s] = liealg::char_poly(f.cat(z));
  }
  std::vector<std::vector<Complex>> out(m + 1);
  for (int k = 0; k <= m; ++k) {
    Matrix v(samples, k + 1);
    Vector re(samples), im(samples);
    for (int s = 0; s < samples; ++s) {
      const double th = std::numbers::pi * s / samples;
      for (int i = 0; i <= k; ++i) v(s, i) = std::pow(std::cos(th), i) * std::pow(std::sin(th), k - i);
      re(s) = values[s][k].real();
      im(s) = values[s][k].imag();
    }
    const auto qr = v.colPivHouseholderQr();
    const Vector cr = qr.solve(re), ci = qr.solve(im);
    out[k].resize(k + 1);
    for (int i = 0; i <= k; ++i) out[k][i] = Complex(cr(i), ci(i));
  }
  return out;
}

namespace {

void require_compatible(const MapFamily& f, const MapFamily& g) {
  if (f.algebra != g.algebra || f.m != g.m || f.r() != g.r())
    throw Error("families are not comparable (torus or algebra mismatch)");
}

std::vector<Vector> grid_on_sphere(int r, int points) {
  std::vector<Vector> grid;
  if (r == 1) {
    grid.push_back(Vector::Ones(1));
    return grid;
  }
  if (r == 2) {
    for (int s = 0; s < points; ++s) {
      const double th = 2.0 * std::numbers::pi * s / points;
      Vector z(2);
      z << std::cos(th), std::sin(th);
      grid.push_back(z);
    }
    return grid;
  }
  Rng rng(0x51ED5EEDULL);
  std::normal_distribution<double> normal;
  for (int s = 0; s < points; ++s) {
    Vector z(r);
    for (int k = 0; k < r; ++k) z(k) = normal(rng);
    grid.push_back(z.normalized());
  }
  return grid;
}

std::vector<std::vector<double>> real_parts(const std::vector<std::vector<Complex>>& p) {
  std::vector<std::vector<double>> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    for (const Complex& c : p[k]) out[k].push_back(c.real());
  return out;
}

}  // namespace

IsospectralCertificate check_isospectral(const MapFamily& f, const MapFamily& fp, int grid_points, double tol) {
  require_compatible(f, fp);
  IsospectralCertificate cert;
  const auto grid = grid_on_sphere(f.r(), grid_points);
  cert.grid_points = static_cast<int>(grid.size());
  double scale = 1.0;
  for (const Vector& z : grid) {
    if (f.is_complex()) {
      const auto a = liealg::orbit_invariants(f.cat(z)), b = liealg::orbit_invariants(fp.cat(z));
      cert.grid_residual = std::max(cert.grid_residual, liealg::invariant_distance(a, b));
      for (const Complex& c : a.char_poly) scale = std::max(scale, std::abs(c));
    } else {
      const bool skew = f.algebra == Algebra::SO;
      const Matrix x = f.at(z), y = fp.at(z);
      const auto a = liealg::orbit_invariants(x, skew), b = liealg::orbit_invariants(y, skew);
      cert.grid_residual = std::max(cert.grid_residual, liealg::invariant_distance(a, b));
      for (const Complex& c : a.char_poly) scale = std::max(scale, std::abs(c));
      if (liealg::conjugacy_test(x, y, skew, tol * scale) == liealg::Conjugacy::Inconclusive)
        cert.inconclusive = true;
    }
  }
  bool poly_ok = true;
  if (f.r() == 2) {
    const auto p = coefficient_polynomials(f), q = coefficient_polynomials(fp);
    for (std::size_t k = 0; k < p.size(); ++k)
      for (std::size_t i = 0; i < p[k].size(); ++i)
        cert.polynomial_residual = std::max(cert.polynomial_residual, std::abs(p[k][i] - q[k][i]));
    cert.coefficient_polys = real_parts(p);
    cert.coefficient_polys_prime = real_parts(q);
    poly_ok = cert.polynomial_residual <= tol * scale;
  }
  cert.pass = cert.grid_residual <= tol * scale && poly_ok;
  return cert;
}

std::pair<MapFamily, MapFamily> swap_pair(const MapFamily& j1, const MapFamily& j2) {
  require_compatible(j1, j2);
  if (j1.algebra == Algebra::Sym0) throw Error("swap_pair: needs so or su families");
  const int m = j1.m;
  MapFamily a, b;
  a.algebra = b.algebra = j1.algebra;
  a.m = b.m = 2 * m;
  for (int k = 0; k < j1.r(); ++k) {
    if (j1.is_complex()) {
      CMatrix x = CMatrix::Zero(2 * m, 2 * m), y = CMatrix::Zero(2 * m, 2 * m);
      x.topLeftCorner(m, m) = j1.cimages[k];
      x.bottomRightCorner(m, m) = j2.cimages[k];
      y.topLeftCorner(m, m) = j2.cimages[k];
      y.bottomRightCorner(m, m) = j1.cimages[k];
      a.cimages.push_back(x);
      b.cimages.push_back(y);
    } else {
      Matrix x = Matrix::Zero(2 * m, 2 * m), y = Matrix::Zero(2 * m, 2 * m);
      x.topLeftCorner(m, m) = j1.images[k];
      x.bottomRightCorner(m, m) = j2.images[k];
      y.topLeftCorner(m, m) = j2.images[k];
      y.bottomRightCorner(m, m) = j1.images[k];
      a.images.push_back(x);
      b.images.push_back(y);
    }
  }
  return {a, b};
}

GenericityResult check_genericity(const MapFamily& f, GenericityMode mode, double tol) {
  GenericityResult res;
  if (mode == GenericityMode::Kernel) {
    const Eigen::Index len = (f.is_complex() ? 2 : 1) * f.m * f.m;
    Matrix cols(len, f.r());
    for (int k = 0; k < f.r(); ++k) {
      if (f.is_complex()) {
        for (Eigen::Index i = 0; i < f.m * f.m; ++i) {
          cols(2 * i, k) = f.cimages[k](i % f.m, i / f.m).real();
          cols(2 * i + 1, k) = f.cimages[k](i % f.m, i / f.m).imag();
        }
      } else {
        cols.col(k) = Eigen::Map<const Vector>(f.images[k].data(), len);
      }
    }
    res.dimension = static_cast<int>(numkit::nullspace_dim(cols, tol));
  } else {
    res.dimension = f.is_complex() ? liealg::centralizer_dim(f.cimages, tol) : liealg::centralizer_dim(f.images, tol);
  }
  res.pass = res.dimension == 0;
  return res;
}

int block_centralizer_dim(const MapFamily& f, int block, double tol) {
  if (f.m != 2 * block) throw Error("block_centralizer_dim: family is not a two-block family");
  int total = 0;
  for (int side = 0; side < 2; ++side) {
    const int off = side * block;
    if (f.is_complex()) {
      std::vector<CMatrix> t;
      for (const auto& x : f.cimages) t.push_back(x.block(off, off, block, block));
      total += liealg::centralizer_dim(t, tol);
    } else {
      std::vector<Matrix> t;
      for (const auto& x : f.images) t.push_back(x.block(off, off, block, block));
      total += liealg::centralizer_dim(t, tol);
    }
  }
  return total;
}

namespace {

Matrix cayley(const Matrix& omega) {
  const Eigen::Index n = omega.rows();
  const Matrix id = Matrix::Identity(n, n);
  return (id - 0.5 * omega).partialPivLu().solve(id + 0.5 * omega);
}

Matrix rotation2(double th) {
  Matrix r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

struct FitProblem {
  const std::vector<Matrix>& src;
  const std::vector<Matrix>& dst;
  std::vector<Matrix> basis;
  bool free_c;

  Matrix target(const Matrix& c, int k) const {
    Matrix t = Matrix::Zero(src[0].rows(), src[0].cols());
    for (std::size_t l = 0; l < dst.size(); ++l) t += c(l, k) * dst[l];
    return t;
  }

  Vector residual(const Matrix& a, const Matrix& c) const {
    const Eigen::Index n2 = src[0].size();
    Vector r(n2 * static_cast<Eigen::Index>(src.size()));
    for (std::size_t k = 0; k < src.size(); ++k) {
      const Matrix d = target(c, static_cast<int>(k)) - a * src[k] * a.transpose();
      r.segment(k * n2, n2) = Eigen::Map<const Vector>(d.data(), n2);
    }
    return r;
  }

  Matrix jacobian(const Matrix& a, const Matrix& c) const {
    const Eigen::Index n2 = src[0].size();
    const Eigen::Index p = static_cast<Eigen::Index>(basis.size()) + (free_c ? 1 : 0);
    Matrix jac(n2 * static_cast<Eigen::Index>(src.size()), p);
    Matrix j2(2, 2);
    j2 << 0, -1, 1, 0;
    for (std::size_t k = 0; k < src.size(); ++k) {
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const Matrix d = -(a * liealg::bracket(basis[b], src[k]) * a.transpose());
        jac.block(k * n2, b, n2, 1) = Eigen::Map<const Vector>(d.data(), n2);
      }
      if (free_c) {
        const Matrix d = target(c * j2, static_cast<int>(k));
        jac.block(k * n2, p - 1, n2, 1) = Eigen::Map<const Vector>(d.data(), n2);
      }
    }
    return jac;
  }

  // Best C in the O(2) component with determinant `sign`, given A.
  Matrix procrustes(const Matrix& a, int sign) const {
    const Eigen::Index r = static_cast<Eigen::Index>(dst.size());
    Matrix n(r, r);
    for (Eigen::Index l = 0; l < r; ++l)
      for (Eigen::Index k = 0; k < r; ++k) n(l, k) = (dst[l].array() * (a * src[k] * a.transpose()).array()).sum();
    Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix d = Matrix::Identity(r, r);
    if ((svd.matrixU() * svd.matrixV().transpose()).determinant() * sign < 0) d(r - 1, r - 1) = -1;
    return svd.matrixU() * d * svd.matrixV().transpose();
  }
};

std::pair<Matrix, Matrix> levenberg_marquardt(const FitProblem& prob, Matrix a, Matrix c, int max_iter) {
  Vector r = prob.residual(a, c);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  for (int it = 0; it < max_iter && cost > 1e-30; ++it) {
    const Matrix jac = prob.jacobian(a, c);
    const Matrix jtj = jac.transpose() * jac;
    const Vector g = jac.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 12; ++tries) {
      Matrix lhs = jtj;
      lhs.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
      const Vector step = -lhs.ldlt().solve(g);
      Matrix omega = Matrix::Zero(a.rows(), a.cols());
      for (std::size_t b = 0; b < prob.basis.size(); ++b) omega += step(b) * prob.basis[b];
      const Matrix a2 = a * cayley(omega);
      const Matrix c2 = prob.free_c ? Matrix(c * rotation2(step(step.size() - 1))) : c;
      const Vector r2 = prob.residual(a2, c2);
      const double cost2 = r2.squaredNorm();
      if (cost2 < cost) {
        const double gain = cost - cost2;
        a = a2;
        c = c2;
        r = r2;
        cost = cost2;
        mu = std::max(mu / 3.0, 1e-15);
        accepted = true;
        if (gain <= 1e-16 * cost && step.norm() < 1e-12) it = max_iter;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
  }
  return {a, c};
}

}  // namespace

FitResult fit_conjugation(const std::vector<Matrix>& src, const std::vector<Matrix>& dst, const FitOptions& opt) {
  if (src.empty() || src.size() != dst.size()) throw Error("fit_conjugation: source/target count mismatch");
  const int m = static_cast<int>(src[0].rows());
  FitProblem prob{src, dst, liealg::so_basis(m), !opt.fixed_c.has_value()};
  if (prob.free_c && src.size() != 2) throw Error("fit_conjugation: free C supported for r = 2 only");
  FitResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.restarts; ++i) {
    Rng rng(numkit::derive_seed(opt.seed, static_cast<std::uint64_t>(i)));
    Matrix a = numkit::haar_special_orthogonal(m, rng);
    const int det = opt.det_sign != 0 ? opt.det_sign : ((i / 2) % 2 == 0 ? 1 : -1);
    if (det < 0) a.col(0) = -a.col(0);
    Matrix c = prob.free_c ? prob.procrustes(a, i % 2 == 0 ? 1 : -1) : *opt.fixed_c;
    auto [a1, c1] = levenberg_marquardt(prob, a, c, opt.max_iterations);
    const double res = prob.residual(a1, c1).norm();
    best.restart_residuals.push_back(res);
    if (res < best.residual) {
      best.residual = res;
      best.a = a1;
      best.c = c1;
      best.best_restart = i;
    }
  }
  return best;
}

EquivalenceResult equivalence_search(const MapFamily& f, const MapFamily& fp, int restarts, std::uint64_t seed,
                                     double threshold) {
  require_compatible(f, fp);
  if (f.is_complex()) throw Error("equivalence_search: real algebras only");
  FitOptions opt;
  opt.restarts = restarts;
  opt.seed = seed;
  const FitResult fit = fit_conjugation(f.images, fp.images, opt);
  EquivalenceResult res;
  res.min_residual = fit.residual;
  res.e = fit.a;
  res.c = fit.c;
  res.threshold = threshold;
  res.restarts = restarts;
  res.equivalent = fit.residual <= 1e-8;
  res.inequivalence_evidence = fit.residual >= threshold;
  return res;
}

namespace {

Vector so_coords(const Matrix& x) {
  const Eigen::Index m = x.rows();
  Vector v(m * (m - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a + 1; b < m; ++b) v(k++) = x(a, b);
  return v;
}

Matrix so_from_coords(const Vector& v, int m) {
  Matrix x = Matrix::Zero(m, m);
  Eigen::Index k = 0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      x(a, b) = v(k);
      x(b, a) = -v(k);
      ++k;
    }
  return x;
}

struct PowerSumSystem {
  int m;
  int angles;
  int kmax;
  Vector target;
  Vector weights;

  Vector values(const Matrix& j1, const Matrix& j2) const {
    Vector out(angles * kmax);
    for (int s = 0; s < angles; ++s) {
      const double th = std::numbers::pi * s / angles;
      const Matrix x = std::cos(th) * j1 + std::sin(th) * j2;
      const Matrix x2 = x * x;
      Matrix p = Matrix::Identity(m, m);
      for (int k = 1; k <= kmax; ++k) {
        p = p * x2;
        out(s * kmax + k - 1) = p.trace();
      }
    }
    return out;
  }

  Vector residual(const Matrix& j1, const Matrix& j2) const {
    return (values(j1, j2) - target).cwiseProduct(weights);
  }

  Matrix jacobian(const Matrix& j1, const Matrix& j2, const std::vector<Matrix>& basis) const {
    const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
    Matrix jac(angles * kmax, 2 * d);
    for (int s = 0; s < angles; ++s) {
      const double th = std::numbers::pi * s / angles;
      const double cs = std::cos(th), sn = std::sin(th);
      const Matrix x = cs * j1 + sn * j2;
      Matrix odd = x;  // x^(2k-1)
      for (int k = 1; k <= kmax; ++k) {
        if (k > 1) odd = odd * x * x;
        const Eigen::Index row = s * kmax + k - 1;
        for (Eigen::Index b = 0; b < d; ++b) {
          const double t = 2.0 * k * (odd * basis[b]).trace() * weights(row);
          jac(row, b) = cs * t;
          jac(row, d + b) = sn * t;
        }
      }
    }
    return jac;
  }
};

Vector min_norm_solve(const Matrix& jac, const Vector& rhs) {
  const auto svd = numkit::jacobi_svd(jac);
  const double smax = svd.singular_values(0);
  const Vector jtr = jac.transpose() * rhs;
  Vector x = Vector::Zero(jac.cols());
  for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i) {
    const double s = svd.singular_values(i);
    if (s <= 1e-10 * smax) continue;
    x += svd.v.col(i) * (svd.v.col(i).dot(jtr) / (s * s));
  }
  return x;
}

}  // namespace

PartnerResult find_isospectral_partner(const MapFamily& j, const PartnerOptions& opt) {
  if (j.algebra != Algebra::SO || j.m < 5 || j.r() != 2)
    throw Error("find_isospectral_partner: requires so(m), m >= 5, r = 2");
  const int m = j.m;
  const auto basis = liealg::so_basis(m);
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  PowerSumSystem sys{m, opt.angles, m / 2, Vector(), Vector()};
  sys.weights = Vector::Ones(opt.angles * sys.kmax);
  sys.target = sys.values(j.images[0], j.images[1]);
  for (Eigen::Index i = 0; i < sys.target.size(); ++i) sys.weights(i) = 1.0 / std::max(1.0, std::abs(sys.target(i)));

  PartnerResult result;
  result.message = "no partner found";
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    result.attempts = attempt + 1;
    Rng rng(numkit::derive_seed(opt.seed, 1000 + static_cast<std::uint64_t>(attempt)));
    Matrix j1 = j.images[0], j2 = j.images[1];

    // Admissible directions: tangent to the constraint set, orthogonal to the orbit.
    const Matrix jac = sys.jacobian(j1, j2, basis);
    Matrix orbit(2 * d, d + 1);
    for (Eigen::Index b = 0; b < d; ++b) {
      orbit.col(b) << so_coords(liealg::bracket(basis[b], j1)), so_coords(liealg::bracket(basis[b], j2));
    }
    orbit.col(d) << so_coords(j2), so_coords(-j1);
    Matrix stacked(jac.rows() + orbit.cols(), 2 * d);
    stacked << jac, orbit.transpose();
    const Matrix dirs = numkit::nullspace_basis(stacked, 1e-9);
    if (dirs.cols() == 0) {
      result.message = "no admissible direction (constraint set is locally an orbit)";
      return result;
    }
    Vector coeff(dirs.cols());
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = normal(rng);
    const double jn = std::sqrt(j1.squaredNorm() + j2.squaredNorm());
    const Vector step = dirs * coeff.normalized() * (opt.step * jn);
    j1 += so_from_coords(step.head(d), m);
    j2 += so_from_coords(step.tail(d), m);

    // Gauss-Newton with minimum-norm steps and step halving.
    Vector res = sys.residual(j1, j2);
    for (int it = 0; it < 200 && res.lpNorm<Eigen::Infinity>() > 1e-14; ++it) {
      const Vector delta = -min_norm_solve(sys.jacobian(j1, j2, basis), res);
      double t = 1.0;
      bool moved = false;
      for (int h = 0; h < 30; ++h, t *= 0.5) {
        const Matrix a = j1 + t * so_from_coords(delta.head(d), m);
        const Matrix b = j2 + t * so_from_coords(delta.tail(d), m);
        const Vector r2 = sys.residual(a, b);
        if (r2.norm() < res.norm()) {
          j1 = a;
          j2 = b;
          res = r2;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }

    MapFamily cand = make_real_family(Algebra::SO, {0.5 * (j1 - j1.transpose()), 0.5 * (j2 - j2.transpose())});
    const auto cert = check_isospectral(j, cand, 720, opt.constraint_tol);
    result.constraint_residual = cert.grid_residual;
    if (!cert.pass) {
      result.message = "Gauss-Newton did not reach the constraint tolerance";
      continue;
    }
    const auto eq = equivalence_search(j, cand, opt.equivalence_restarts,
                                       numkit::derive_seed(opt.seed, 2000 + static_cast<std::uint64_t>(attempt)),
                                       opt.equivalence_threshold);
    result.equivalence_residual = eq.min_residual;
    result.partner = cand;
    if (eq.inequivalence_evidence) {
      result.success = true;
      result.message = "partner found";
      return result;
    }
    result.message = "candidate equivalent to input";
  }
  return result;
}

MapFamily random_so_family(int m, int r, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> images;
  for (int k = 0; k < r; ++k) {
    const Matrix g = numkit::gaussian_matrix(m, m, rng);
    const Matrix x = g - g.transpose();
    images.push_back(x / x.norm());
  }
  return make_real_family(Algebra::SO, images);
}

MapFamily random_su_family(int m, int r, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CMatrix> images;
  for (int k = 0; k < r; ++k) {
    const Matrix a = numkit::gaussian_matrix(m, m, rng), b = numkit::gaussian_matrix(m, m, rng);
    CMatrix g(m, m);
    g.real() = a;
    g.imag() = b;
    CMatrix x = g - g.adjoint();
    x.diagonal().array() -= x.trace() / static_cast<double>(m);
    images.push_back(x / x.norm());
  }
  return make_su_family(images);
}

MapFamily conjugate_family(const MapFamily& f, const Matrix& s) {
  if (f.is_complex()) return conjugate_family(f, CMatrix(s.cast<Complex>()));
  MapFamily g = f;
  const Matrix si = s.inverse();
  for (auto& x : g.images) x = s * x * si;
  return g;
}

MapFamily conjugate_family(const MapFamily& f, const CMatrix& s) {
  if (!f.is_complex()) throw Error("conjugate_family: complex conjugator for a real family");
  MapFamily g = f;
  const CMatrix si = s.inverse();
  for (auto& x : g.cimages) x = s * x * si;
  return g;
}

nlohmann::json to_json(const MapFamily& f) {
  nlohmann::json j;
  j["schema"] = "isospec.family/1";
  j["algebra"] = liealg::algebra_name(f.algebra);
  j["m"] = f.m;
  j["r"] = f.r();
  nlohmann::json imgs = nlohmann::json::array();
  for (int k = 0; k < f.r(); ++k) {
    nlohmann::json rows = nlohmann::json::array();
    for (int a = 0; a < f.m; ++a) {
      nlohmann::json row = nlohmann::json::array();
      for (int b = 0; b < f.m; ++b) {
        if (f.is_complex())
          row.push_back({f.cimages[k](a, b).real(), f.cimages[k](a, b).imag()});
        else
          row.push_back(f.images[k](a, b));
      }
      rows.push_back(row);
    }
    imgs.push_back(rows);
  }
  j["images"] = imgs;
  return j;
}

static MapFamily family_from_json_unchecked(const nlohmann::json& j);

MapFamily family_from_json(const nlohmann::json& j) {
  try {
    return family_from_json_unchecked(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("family JSON: ") + e.what());
  }
}

static MapFamily family_from_json_unchecked(const nlohmann::json& j) {
  const Algebra alg = liealg::parse_algebra(j.at("algebra").get<std::string>());
  const int m = j.at("m").get<int>();
  const auto& imgs = j.at("images");
  if (j.contains("r") && j.at("r").get<int>() != static_cast<int>(imgs.size()))
    throw Error("family JSON: r does not match the number of images");
  if (alg == Algebra::SU) {
    std::vector<CMatrix> out;
    for (const auto& rows : imgs) {
      CMatrix x(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) x(a, b) = Complex(rows.at(a).at(b).at(0).get<double>(), rows.at(a).at(b).at(1).get<double>());
      out.push_back(x);
    }
    return make_su_family(out);
  }
  std::vector<Matrix> out;
  for (const auto& rows : imgs) {
    Matrix x(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) x(a, b) = rows.at(a).at(b).get<double>();
    out.push_back(x);
  }
  return make_real_family(alg, out);
}

MapFamily load_family(const std::string& ref) {
  if (ref == "paper-4.6") return paper_cmaps().c;
  if (ref == "paper-4.6-prime") return paper_cmaps().cp;
  std::ifstream in(ref);
  if (!in) throw Error("cannot open family file '" + ref + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("family file '" + ref + "': " + e.what());
  }
  return family_from_json(j);
}

}  // namespace isospec::jmaps

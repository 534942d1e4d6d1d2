#include "isospec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace isospec::geometry {

using jmaps::MapFamily;
using liealg::Algebra;

int AmbientSpace::dim() const {
  switch (variant) {
    case Variant::RmRmCr: return 2 * m + 2 * r;
    case Variant::CmCm: return 4 * m;
    case Variant::Euclidean: return m;
  }
  return 0;
}

int AmbientSpace::factor_dim() const { return variant == Variant::CmCm ? 2 * m : m; }

int AmbientSpace::manifold_dim() const { return manifold == Manifold::Sphere ? dim() - 1 : dim(); }

std::vector<int> AmbientSpace::p_indices() const {
  std::vector<int> v(factor_dim());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<int> AmbientSpace::q_indices() const {
  if (variant == Variant::Euclidean) return {};
  std::vector<int> v(factor_dim());
  std::iota(v.begin(), v.end(), factor_dim());
  return v;
}

std::vector<int> AmbientSpace::u_indices() const {
  std::vector<int> v;
  if (variant != Variant::Euclidean)
    for (int i = 2 * factor_dim(); i < dim(); ++i) v.push_back(i);
  return v;
}

namespace {

// Coordinate pairs rotated by the k-th circle factor.
std::vector<std::pair<int, int>> generator_pairs(const AmbientSpace& amb, int k) {
  std::vector<std::pair<int, int>> pairs;
  if (amb.variant == Variant::RmRmCr) {
    const int base = 2 * amb.m + 2 * k;
    pairs.emplace_back(base, base + 1);
  } else {
    const int off = k == 0 ? 0 : 2 * amb.m;
    for (int i = 0; i < amb.m; ++i) pairs.emplace_back(off + 2 * i, off + 2 * i + 1);
  }
  return pairs;
}

}  // namespace

Matrix AmbientSpace::generator(int k) const {
  if (k < 0 || k >= r) throw Error("generator: index out of range");
  if (variant == Variant::CmCm && r != 2) throw Error("C^m + C^m carries a 2-torus");
  if (variant == Variant::Euclidean) throw Error("generator: R^N carries no torus");
  const int n = dim();
  Matrix g = Matrix::Zero(n, n);
  for (auto [a, b] : generator_pairs(*this, k)) {
    g(b, a) = 1.0;
    g(a, b) = -1.0;
  }
  return g;
}

Matrix AmbientSpace::torus_element(const Vector& angles) const {
  if (angles.size() != r) throw Error("torus_element: wrong number of angles");
  Matrix t = Matrix::Identity(dim(), dim());
  for (int k = 0; k < r; ++k)
    for (auto [a, b] : generator_pairs(*this, k)) {
      const double c = std::cos(angles(k)), s = std::sin(angles(k));
      t(a, a) = c;
      t(a, b) = -s;
      t(b, a) = s;
      t(b, b) = c;
    }
  return t;
}

std::string AmbientSpace::describe() const {
  std::ostringstream os;
  os << (manifold == Manifold::Sphere ? "S^" : "B^") << manifold_dim() << " in "
     << (variant == Variant::RmRmCr ? "R^m+R^m+C^r" : variant == Variant::CmCm ? "C^m+C^m" : "R^N") << " (m=" << m << ", r=" << r << ", N=" << dim()
     << ")";
  return os.str();
}

Vector sample_point(const AmbientSpace& amb, Rng& rng) {
  std::normal_distribution<double> normal;
  const int n = amb.dim();
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = normal(rng);
  x.normalize();
  if (amb.manifold == Manifold::Ball) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    x *= std::pow(uni(rng), 1.0 / n);
  }
  return x;
}

const char* form_kind_name(FormKind k) {
  switch (k) {
    case FormKind::Linear: return "linear";
    case FormKind::Cross: return "cross";
    case FormKind::Hopf: return "hopf";
  }
  return "?";
}

ScaleSpec ScaleSpec::product_pq() {
  ScaleSpec s;
  s.kind = Kind::Polynomial;
  s.coefficients[{1, 1, 0}] = 1.0;
  return s;
}

ScaleSpec ScaleSpec::cutoff(double s0, int power) {
  ScaleSpec s;
  s.kind = Kind::Cutoff;
  s.s0 = s0;
  s.power = power;
  return s;
}

double ScaleSpec::evaluate(double sp, double sq, double su) const {
  switch (kind) {
    case Kind::None: return 1.0;
    case Kind::Cutoff: return std::pow(std::max(0.0, sp + sq - s0), power);
    case Kind::Polynomial: {
      double v = 0.0;
      for (const auto& [e, c] : coefficients) v += c * std::pow(sp, e[0]) * std::pow(sq, e[1]) * std::pow(su, e[2]);
      return v;
    }
  }
  return 1.0;
}

bool ScaleSpec::symmetric(double tol) const {
  if (kind != Kind::Polynomial) return true;
  for (const auto& [e, c] : coefficients) {
    auto it = coefficients.find({e[1], e[0], e[2]});
    const double other = it == coefficients.end() ? 0.0 : it->second;
    if (std::abs(c - other) > tol * (1.0 + std::abs(c))) return false;
  }
  return true;
}

std::string ScaleSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::None: return "1";
    case Kind::Cutoff: os << "max(0,|p|^2+|q|^2-" << s0 << ")^" << power; return os.str();
    case Kind::Polynomial: {
      bool first = true;
      for (const auto& [e, c] : coefficients) {
        if (!first) os << " + ";
        first = false;
        os << c;
        if (e[0]) os << "*|p|^" << 2 * e[0];
        if (e[1]) os << "*|q|^" << 2 * e[1];
        if (e[2]) os << "*|u|^" << 2 * e[2];
      }
      return os.str();
    }
  }
  return "?";
}

Vector hopf_map(const Vector& p) {
  if (p.size() != 4) throw Error("hopf_map: expected a point of R^4");
  Vector out(3);
  out << 0.5 * (p(0) * p(0) + p(1) * p(1) - p(2) * p(2) - p(3) * p(3)), p(0) * p(2) + p(1) * p(3),
      p(0) * p(3) - p(1) * p(2);
  return out;
}

Matrix hopf_jacobian(const Vector& p) {
  if (p.size() != 4) throw Error("hopf_jacobian: expected a point of R^4");
  Matrix j(3, 4);
  j << p(0), p(1), -p(2), -p(3), p(2), p(3), p(0), p(1), p(3), -p(2), -p(1), p(0);
  return j;
}

namespace {

Vector cross3(const Vector& a, const Vector& b) {
  Vector c(3);
  c << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
  return c;
}

Matrix lift_to_su2_real(const Matrix& e) {
  // P o A = E o P forces E in SO(3); a reflection is replaced by -E, which
  // acts identically by conjugation on Sym0(R^3).
  const Matrix rot = e.determinant() < 0 ? Matrix(-e) : e;
  return liealg::realify(liealg::su2_action_on_c2(liealg::so3_lift(rot)));
}

void require_r2(const AmbientSpace& amb, const MapFamily& f) {
  if (f.r() != amb.r) throw Error("form: family rank does not match the torus rank");
}

}  // namespace

Matrix factor_covectors(FormKind kind, const MapFamily& f, const Vector& p) {
  const int r = f.r();
  switch (kind) {
    case FormKind::Linear: {
      Matrix out(r, p.size());
      for (int k = 0; k < r; ++k) out.row(k) = (f.images[k] * p).transpose();
      return out;
    }
    case FormKind::Cross: {
      Matrix out(r, 3);
      for (int k = 0; k < r; ++k) out.row(k) = cross3(f.images[k] * p, p).transpose();
      return out;
    }
    case FormKind::Hopf: {
      const Vector hp = hopf_map(p);
      const Matrix jac = hopf_jacobian(p);
      Matrix out(r, 4);
      for (int k = 0; k < r; ++k) out.row(k) = (jac.transpose() * cross3(f.images[k] * hp, hp)).transpose();
      return out;
    }
  }
  throw Error("factor_covectors: unknown kind");
}

AdmissibleForm AdmissibleForm::linear(const AmbientSpace& amb, const MapFamily& j, const MapFamily& jp) {
  if (amb.variant != Variant::RmRmCr) throw Error("linear forms live on R^m+R^m+C^r");
  if (j.algebra != Algebra::SO || jp.algebra != Algebra::SO || j.m != amb.m || jp.m != amb.m)
    throw Error("linear forms need so(m) families matching the ambient m");
  require_r2(amb, j);
  require_r2(amb, jp);
  AdmissibleForm f;
  f.ambient_ = amb;
  f.kind_ = FormKind::Linear;
  f.f_ = j;
  f.fp_ = jp;
  return f;
}

AdmissibleForm AdmissibleForm::cross(const AmbientSpace& amb, const MapFamily& c, const MapFamily& cp) {
  if (amb.variant != Variant::RmRmCr || amb.m != 3) throw Error("cross-product forms live on R^3+R^3+C^r");
  if (c.algebra != Algebra::Sym0 || cp.algebra != Algebra::Sym0) throw Error("cross-product forms need Sym0 data");
  require_r2(amb, c);
  require_r2(amb, cp);
  AdmissibleForm f;
  f.ambient_ = amb;
  f.kind_ = FormKind::Cross;
  f.f_ = c;
  f.fp_ = cp;
  return f;
}

AdmissibleForm AdmissibleForm::hopf(const AmbientSpace& amb, const MapFamily& c, const MapFamily& cp,
                                    const Matrix& e, const Matrix& ep) {
  if (amb.variant != Variant::CmCm || amb.m != 2 || amb.r != 2) throw Error("Hopf forms live on C^2+C^2");
  if (c.algebra != Algebra::Sym0 || cp.algebra != Algebra::Sym0) throw Error("Hopf forms need Sym0 data");
  AdmissibleForm f;
  f.ambient_ = amb;
  f.kind_ = FormKind::Hopf;
  f.f_ = c;
  f.fp_ = cp;
  f.a_ = lift_to_su2_real(e);
  f.ap_ = lift_to_su2_real(ep);
  return f;
}

AdmissibleForm AdmissibleForm::zero(const AmbientSpace& amb) {
  if (amb.variant == Variant::Euclidean && amb.r != 0) throw Error("form: R^N carries no torus, r must be 0");
  AdmissibleForm f;
  f.ambient_ = amb;
  f.zero_ = true;
  return f;
}

AdmissibleForm AdmissibleForm::prime() const {
  AdmissibleForm f = *this;
  f.primed_ = !primed_;
  return f;
}

AdmissibleForm AdmissibleForm::scaled(const ScaleSpec& s) const {
  if (!s.symmetric()) throw Error("scale_form: alpha must be symmetric in its first two arguments");
  AdmissibleForm f = *this;
  f.scale_ = s;
  return f;
}

Matrix AdmissibleForm::covectors(const Vector& x) const {
  const int n = ambient_.dim();
  if (x.size() != n) throw Error("form: point has wrong dimension");
  Matrix out = Matrix::Zero(r(), n);
  if (zero_) return out;
  const int k = ambient_.factor_dim();
  const Vector p = x.head(k), q = x.segment(k, k);
  out.block(0, 0, r(), k) = factor_covectors(kind_, first(), p);
  out.block(0, k, r(), k) = factor_covectors(kind_, second(), q);
  if (scale_.kind != ScaleSpec::Kind::None) {
    const double su = x.tail(n - 2 * k).squaredNorm();
    out *= scale_.evaluate(p.squaredNorm(), q.squaredNorm(), su);
  }
  return out;
}

Vector AdmissibleForm::eval(const Vector& x, const Vector& tangent) const {
  if (tangent.size() != ambient_.dim()) throw Error("form: tangent vector has wrong dimension");
  return covectors(x) * tangent;
}

namespace {

std::vector<std::vector<Polynomial>> factor_polys(FormKind kind, const MapFamily& f, int nvars, int off) {
  const int r = f.r();
  auto var = [&](int i) { return Polynomial::variable(nvars, off + i); };
  const int k = kind == FormKind::Hopf ? 4 : f.m;
  std::vector<std::vector<Polynomial>> out(r, std::vector<Polynomial>(k, Polynomial(nvars)));
  auto cross = [&](const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
    return std::vector<Polynomial>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  auto apply = [&](const Matrix& c, const std::vector<Polynomial>& v) {
    std::vector<Polynomial> w(3, Polynomial(nvars));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (c(a, b) != 0.0) w[a] += v[b] * c(a, b);
    return w;
  };
  for (int z = 0; z < r; ++z) {
    const Matrix& img = f.images[z];
    if (kind == FormKind::Linear) {
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          if (img(a, b) != 0.0) out[z][a] += var(b) * img(a, b);
    } else if (kind == FormKind::Cross) {
      std::vector<Polynomial> p{var(0), var(1), var(2)};
      out[z] = cross(apply(img, p), p);
    } else {
      const Polynomial x0 = var(0), x1 = var(1), x2 = var(2), x3 = var(3);
      std::vector<Polynomial> hp{(x0 * x0 + x1 * x1 - x2 * x2 - x3 * x3) * 0.5, x0 * x2 + x1 * x3, x0 * x3 - x1 * x2};
      const std::vector<Polynomial> w = cross(apply(img, hp), hp);
      for (int a = 0; a < 4; ++a) {
        Polynomial s(nvars);
        for (int i = 0; i < 3; ++i) s += hp[i].derivative(off + a) * w[i];
        out[z][a] = s;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<Polynomial>> AdmissibleForm::polynomial_components() const {
  const int n = ambient_.dim();
  std::vector<std::vector<Polynomial>> out(r(), std::vector<Polynomial>(n, Polynomial(n)));
  if (zero_) return out;
  if (scale_.kind == ScaleSpec::Kind::Cutoff) throw Error("form: cutoff scaling has no polynomial representation");
  const int k = ambient_.factor_dim();
  const auto a = factor_polys(kind_, first(), n, 0);
  const auto b = factor_polys(kind_, second(), n, k);
  Polynomial alpha = Polynomial::constant(n, 1.0);
  if (scale_.kind == ScaleSpec::Kind::Polynomial) {
    const Polynomial sp = Polynomial::squared_norm(n, ambient_.p_indices());
    const Polynomial sq = Polynomial::squared_norm(n, ambient_.q_indices());
    const Polynomial su = Polynomial::squared_norm(n, ambient_.u_indices());
    alpha = Polynomial(n);
    for (const auto& [e, c] : scale_.coefficients) alpha += sp.pow(e[0]) * sq.pow(e[1]) * su.pow(e[2]) * c;
  }
  for (int z = 0; z < r(); ++z)
    for (int i = 0; i < k; ++i) {
      out[z][i] = a[z][i] * alpha;
      out[z][k + i] = b[z][i] * alpha;
    }
  return out;
}

std::string AdmissibleForm::describe() const {
  if (zero_) return "zero form on " + ambient_.describe();
  std::ostringstream os;
  os << (primed_ ? "lambda'" : "lambda") << " [" << form_kind_name(kind_) << "] on " << ambient_.describe();
  if (scale_.kind != ScaleSpec::Kind::None) os << " scaled by " << scale_.describe();
  return os.str();
}

MetricAt metric_at(const AdmissibleForm& form, const Vector& x) {
  const AmbientSpace& amb = form.ambient();
  const int n = amb.dim();
  MetricAt out;
  out.lambda = Matrix::Zero(n, n);
  const Matrix cov = form.covectors(x);
  for (int k = 0; k < amb.r; ++k) out.lambda += (amb.generator(k) * x) * cov.row(k);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix ip = id + out.lambda, im = id - out.lambda;
  out.gram = ip.transpose() * ip;
  out.gram_inv = im * im.transpose();
  out.det = ip.determinant();
  return out;
}

double PotentialField::evaluate(const AmbientSpace& amb, const Vector& x) const {
  const int k = amb.factor_dim();
  const double s = (slot == 1 ? x.head(k) : x.segment(k, k)).squaredNorm();
  double v = 0.0, sp = 1.0;
  for (double c : psi) {
    v += c * sp;
    sp *= s;
  }
  return v;
}

Polynomial PotentialField::polynomial(const AmbientSpace& amb) const {
  const int n = amb.dim();
  const Polynomial s = Polynomial::squared_norm(n, slot == 1 ? amb.p_indices() : amb.q_indices());
  Polynomial out(n), sp = Polynomial::constant(n, 1.0);
  for (double c : psi) {
    out += sp * c;
    sp = sp * s;
  }
  return out;
}

RationalPolynomial PotentialField::rational_polynomial(const AmbientSpace& amb) const {
  const int n = amb.dim();
  const auto idx = slot == 1 ? amb.p_indices() : amb.q_indices();
  const RationalPolynomial s = RationalPolynomial::squared_norm(n, idx);
  RationalPolynomial out(n), sp = RationalPolynomial::constant(n, Rational(1));
  for (double c : psi) {
    // Exact for every double: the binary expansion is a dyadic rational.
    out += sp * Rational(c);
    sp = sp * s;
  }
  return out;
}

PotentialField default_profile_decreasing() { return {{2.0, -1.0}, 1}; }
PotentialField default_profile_increasing() { return {{1.0, 1.0}, 1}; }

namespace {

double max_equivariance_defect(const AmbientSpace& amb, const Matrix& f, const Matrix& psi) {
  double d = 0.0;
  for (int k = 0; k < amb.r; ++k) {
    Matrix gk = Matrix::Zero(amb.dim(), amb.dim());
    for (int l = 0; l < amb.r; ++l) gk += psi(l, k) * amb.generator(l);
    d = std::max(d, (f * amb.generator(k) - gk * f).cwiseAbs().maxCoeff());
  }
  return d;
}

}  // namespace

StarCheck check_star_condition(const AdmissibleForm& lam, const AdmissibleForm& lamp, const Vector& mu,
                               const Matrix& f, int samples, std::uint64_t seed, const PotentialField* potential,
                               double tol) {
  const AmbientSpace& amb = lam.ambient();
  const int n = amb.dim();
  if (f.rows() != n || f.cols() != n) throw Error("star condition: F has wrong size");
  if (mu.size() != amb.r) throw Error("star condition: mu has wrong size");
  StarCheck out;
  out.orthogonality_residual = (f.transpose() * f - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  out.equivariance_residual = max_equivariance_defect(amb, f, Matrix::Identity(amb.r, amb.r));
  Rng rng(seed);
  std::normal_distribution<double> normal;
  double scale = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector x = sample_point(amb, rng);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    const double lhs = mu.dot(lam.eval(x, v));
    const double rhs = mu.dot(lamp.eval(f * x, f * v));
    out.residual = std::max(out.residual, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(lhs));
    if (potential) {
      out.potential_residual =
          std::max(out.potential_residual, std::abs(potential->evaluate(amb, f * x) - potential->evaluate(amb, x)));
    }
  }
  out.pass = out.residual <= tol * (1.0 + scale) && out.orthogonality_residual <= 1e-12 &&
             out.equivariance_residual <= 1e-12 && out.potential_residual <= tol;
  return out;
}

namespace {

Vector positive_sign(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace

Matrix matching_rotation(const Matrix& x, const Matrix& y) {
  const auto ex = numkit::sym_eigen(numkit::SymmetricMatrix::from_dense(x, 1e-12));
  const auto ey = numkit::sym_eigen(numkit::SymmetricMatrix::from_dense(y, 1e-12));
  const Eigen::Index n = x.rows();
  Matrix vx(n, n), vy(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    vx.col(i) = positive_sign(ex.vectors.col(i));
    vy.col(i) = positive_sign(ey.vectors.col(i));
  }
  Matrix e = vy * vx.transpose();
  if (e.determinant() < 0) {
    vy.col(n - 1) = -vy.col(n - 1);
    e = vy * vx.transpose();
  }
  return e;
}

namespace {

// Orthonormal basis in which skew x takes the canonical block form
// diag([[0,-t1],[t1,0]], ..., 0, ...), blocks ordered by ascending t.
Matrix canonical_skew_frame(const Matrix& x, Vector& thetas) {
  const Eigen::Index n = x.rows();
  const Matrix s = -(x * x);
  const auto es = numkit::sym_eigen(numkit::SymmetricMatrix::from_dense(0.5 * (s + s.transpose())));
  const double scale = std::max(1.0, std::abs(es.values(n - 1)));
  Matrix frame(n, n);
  Eigen::Index filled = 0;
  std::vector<double> th;
  std::vector<Vector> kernel;
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index jend = i + 1;
    while (jend < n && std::abs(es.values(jend) - es.values(i)) <= 1e-9 * scale) ++jend;
    const double t2 = es.values.segment(i, jend - i).mean();
    if (t2 <= 1e-12 * scale) {
      for (Eigen::Index c = i; c < jend; ++c) kernel.push_back(es.vectors.col(c));
    } else {
      const double t = std::sqrt(t2);
      std::vector<Vector> chosen;
      for (Eigen::Index c = i; c < jend && static_cast<Eigen::Index>(chosen.size()) < jend - i; ++c) {
        Vector v = es.vectors.col(c);
        for (const Vector& u : chosen) v -= u.dot(v) * u;
        if (v.norm() < 1e-6) continue;
        v.normalize();
        const Vector w = x * v / t;
        chosen.push_back(v);
        chosen.push_back(w);
        frame.col(filled++) = v;
        frame.col(filled++) = w;
        th.push_back(t);
      }
    }
    i = jend;
  }
  for (const Vector& k : kernel) frame.col(filled++) = k;
  if (filled != n) throw Error("canonical_skew_frame: could not complete the frame");
  thetas = Eigen::Map<Vector>(th.data(), static_cast<Eigen::Index>(th.size()));
  return frame;
}

}  // namespace

Matrix matching_orthogonal_skew(const Matrix& x, const Matrix& y) {
  Vector tx, ty;
  const Matrix fx = canonical_skew_frame(x, tx);
  Matrix fy = canonical_skew_frame(y, ty);
  if (tx.size() != ty.size() || (tx - ty).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, tx.cwiseAbs().maxCoeff()))
    throw Error("matching_orthogonal_skew: spectra differ");
  Matrix a = fy * fx.transpose();
  if (a.determinant() < 0 && 2 * tx.size() < x.rows()) {
    fy.col(x.rows() - 1) = -fy.col(x.rows() - 1);
    a = fy * fx.transpose();
  }
  return a;
}

Matrix a_mu(const AdmissibleForm& form, const Vector& mu) {
  const int k = form.ambient().factor_dim();
  if (form.is_zero() || mu.norm() == 0.0) return Matrix::Identity(k, k);
  const MapFamily& f = form.first();
  const MapFamily& fp = form.second();
  switch (form.kind()) {
    case FormKind::Linear: return matching_orthogonal_skew(f.at(mu), fp.at(mu));
    case FormKind::Cross: return matching_rotation(f.at(mu), fp.at(mu));
    case FormKind::Hopf: return lift_to_su2_real(matching_rotation(f.at(mu), fp.at(mu)));
  }
  throw Error("a_mu: unknown form kind");
}

Matrix f_mu(const AdmissibleForm& form, const Vector& mu) {
  const AmbientSpace& amb = form.ambient();
  const int n = amb.dim(), k = amb.factor_dim();
  const Matrix a = a_mu(form, mu);
  Matrix f = Matrix::Identity(n, n);
  f.block(0, 0, k, k) = a;
  f.block(k, k, k, k) = a.transpose();
  return f;
}

std::vector<Vector> primitive_functionals(int r, int bound) {
  std::vector<Vector> out;
  if (r == 2) {
    for (int a = 0; a <= bound; ++a)
      for (int b = -bound; b <= bound; ++b) {
        if (a == 0 && b <= 0) continue;
        if (std::gcd(a, std::abs(b)) != 1) continue;
        Vector v(2);
        v << a, b;
        out.push_back(v);
      }
  }
  for (int k = 0; k < r; ++k) out.push_back(Vector::Unit(r, k));
  return out;
}

Matrix tau_matrix(const AdmissibleForm& form) {
  const AmbientSpace& amb = form.ambient();
  const int n = amb.dim(), k = amb.factor_dim();
  Matrix t = Matrix::Zero(n, n);
  if (amb.variant == Variant::RmRmCr) {
    t.block(0, k, k, k) = Matrix::Identity(k, k);
    t.block(k, 0, k, k) = Matrix::Identity(k, k);
    if (n > 2 * k) t.block(2 * k, 2 * k, n - 2 * k, n - 2 * k) = Matrix::Identity(n - 2 * k, n - 2 * k);
  } else {
    if (form.kind() != FormKind::Hopf) throw Error("tau_map: C^m+C^m needs the SU(2) elements A, A'");
    t.block(0, k, k, k) = form.ap();
    t.block(k, 0, k, k) = form.a();
  }
  return t;
}

Matrix tau_psi(const AdmissibleForm& form) {
  const int r = form.r();
  if (form.ambient().variant == Variant::RmRmCr) return Matrix::Identity(r, r);
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

TauCheck check_tau(const AdmissibleForm& lam, int samples, std::uint64_t seed, const PotentialField* potential,
                   double tol) {
  const AmbientSpace& amb = lam.ambient();
  const int n = amb.dim();
  TauCheck out;
  out.tau = tau_matrix(lam);
  out.psi = tau_psi(lam);
  out.orthogonality_residual = (out.tau.transpose() * out.tau - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  out.equivariance_residual = max_equivariance_defect(amb, out.tau, out.psi);
  const AdmissibleForm lamp = lam.prime();
  Rng rng(seed);
  std::normal_distribution<double> normal;
  double scale = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector x = sample_point(amb, rng);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    const Vector lhs = out.psi * lam.eval(x, v);
    const Vector rhs = lamp.eval(out.tau * x, out.tau * v);
    out.residual = std::max(out.residual, (lhs - rhs).cwiseAbs().maxCoeff());
    scale = std::max(scale, lhs.cwiseAbs().maxCoeff());
    if (potential) {
      const PotentialField p1 = potential->with_slot(1), p2 = potential->with_slot(2);
      out.potential_residual =
          std::max(out.potential_residual, std::abs(p2.evaluate(amb, x) - p1.evaluate(amb, out.tau * x)));
    }
  }
  out.pass = out.residual <= tol * (1.0 + scale) && out.orthogonality_residual <= 1e-12 &&
             out.equivariance_residual <= 1e-12 && out.potential_residual <= tol;
  return out;
}

Vector curvature_two_form(const AdmissibleForm& form, const Vector& x, const Vector& xv, const Vector& yv,
                          double fd_step) {
  const int n = form.ambient().dim(), r = form.r();
  Vector out = Vector::Zero(r);
  if (fd_step > 0.0) {
    // d lambda(X,Y) = X(lambda(Y)) - Y(lambda(X)) for constant fields.
    const Vector dx = (form.covectors(x + fd_step * xv) - form.covectors(x - fd_step * xv)) * yv / (2 * fd_step);
    const Vector dy = (form.covectors(x + fd_step * yv) - form.covectors(x - fd_step * yv)) * xv / (2 * fd_step);
    return dx - dy;
  }
  const auto comps = form.polynomial_components();
  for (int k = 0; k < r; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (comps[k][b].empty()) continue;
        const double dab = comps[k][b].derivative(a).evaluate(x);
        out(k) += dab * (xv(a) * yv(b) - yv(a) * xv(b));
      }
  return out;
}

Vector factor_curvature_closed_form(FormKind kind, const MapFamily& f, const Vector& p, const Vector& xv,
                                   const Vector& yv) {
  Vector out(f.r());
  for (int k = 0; k < f.r(); ++k) {
    if (kind == FormKind::Linear)
      out(k) = 2.0 * (f.images[k] * xv).dot(yv);
    else if (kind == FormKind::Cross)
      out(k) = 3.0 * cross3(f.images[k] * p, xv).dot(yv);
    else
      throw Error("factor_curvature_closed_form: no closed form for Hopf forms");
  }
  return out;
}

Vector factor_curvature_fd(FormKind kind, const MapFamily& f, const Vector& p, const Vector& xv, const Vector& yv,
                           double h) {
  const Vector dx = (factor_covectors(kind, f, p + h * xv) - factor_covectors(kind, f, p - h * xv)) * yv / (2 * h);
  const Vector dy = (factor_covectors(kind, f, p + h * yv) - factor_covectors(kind, f, p - h * yv)) * xv / (2 * h);
  return dx - dy;
}

}  // namespace isospec::geometry

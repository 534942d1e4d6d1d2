#include "isospec/liegroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isospec::liegroup {

const char* group_family_name(GroupFamily f) { return f == GroupFamily::SO ? "SO" : "SU"; }

int GroupModel::size() const { return family == GroupFamily::SO ? 2 * m + 2 * r : 2 * m + r + 1; }

int GroupModel::algebra_dim() const {
  const int n = size();
  return family == GroupFamily::SO ? n * (n - 1) / 2 : n * n - 1;
}

std::vector<CMatrix> GroupModel::algebra_basis() const {
  if (family == GroupFamily::SU) return liealg::su_basis(size());
  std::vector<CMatrix> out;
  for (const Matrix& e : liealg::so_basis(size())) out.push_back(e.cast<Complex>());
  return out;
}

std::vector<CMatrix> GroupModel::z_basis() const {
  const int n = size();
  std::vector<CMatrix> out;
  for (int k = 0; k < r; ++k) {
    CMatrix z = CMatrix::Zero(n, n);
    if (family == GroupFamily::SO) {
      const int a = 2 * m + 2 * k;
      z(a + 1, a) = 1.0;
      z(a, a + 1) = -1.0;
    } else {
      // Diagonal Gell-Mann element number k+1 of su(r+1), placed in the P block.
      const Complex i(0.0, 1.0);
      const int kk = k + 1;
      const double s = 1.0 / std::sqrt(static_cast<double>(kk) * (kk + 1));
      for (int a = 0; a < kk; ++a) z(2 * m + a, 2 * m + a) = i * s;
      z(2 * m + kk, 2 * m + kk) = -i * (kk * s);
    }
    out.push_back(z);
  }
  return out;
}

CMatrix GroupModel::embed_h(const CMatrix& x, const CMatrix& y) const {
  if (x.rows() != m || y.rows() != m) throw Error("embed_h: blocks must be m x m");
  CMatrix out = CMatrix::Zero(size(), size());
  out.block(0, 0, m, m) = x;
  out.block(m, m, m, m) = y;
  return out;
}

double GroupModel::g0(const CMatrix& x, const CMatrix& y) const {
  const Complex t = (x * y).trace();
  return family == GroupFamily::SO ? -0.5 * t.real() : -t.real();
}

Vector GroupModel::coordinates(const CMatrix& x) const {
  const auto basis = algebra_basis();
  Vector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) c(static_cast<Eigen::Index>(i)) = g0(basis[i], x);
  return c;
}

CMatrix GroupModel::tau() const {
  const int n = size();
  CMatrix s = CMatrix::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    s(i, m + i) = 1.0;
    s(m + i, i) = 1.0;
  }
  for (int i = 2 * m; i < n; ++i) s(i, i) = 1.0;
  return s;
}

std::string GroupModel::describe() const {
  std::ostringstream os;
  os << group_family_name(family) << "(" << size() << ") with m=" << m << ", r=" << r;
  return os.str();
}

std::vector<CMatrix> j_images(const GroupModel& g, const jmaps::MapFamily& j1, const jmaps::MapFamily& j2) {
  if (j1.m != g.m || j2.m != g.m || j1.r() != g.r || j2.r() != g.r)
    throw Error("j_images: families do not match the group layout");
  const bool su = g.family == GroupFamily::SU;
  if (j1.is_complex() != su || j2.is_complex() != su) throw Error("j_images: family algebra does not match the group");
  std::vector<CMatrix> out;
  for (int k = 0; k < g.r; ++k) {
    const CMatrix a = su ? j1.cimages[k] : CMatrix(j1.images[k].cast<Complex>());
    const CMatrix b = su ? j2.cimages[k] : CMatrix(j2.images[k].cast<Complex>());
    out.push_back(g.embed_h(a, b));
  }
  return out;
}

LeftInvariantMetric make_metric(const GroupModel& g, const jmaps::MapFamily& j1, const jmaps::MapFamily& j2) {
  LeftInvariantMetric lm;
  lm.group = g;
  lm.j = j_images(g, j1, j2);
  const int d = g.algebra_dim();
  lm.lambda = Matrix::Zero(d, d);
  const auto z = g.z_basis();
  for (int k = 0; k < g.r; ++k) lm.lambda += g.coordinates(z[k]) * g.coordinates(lm.j[k]).transpose();
  const Matrix ip = Matrix::Identity(d, d) + lm.lambda;
  lm.gram = ip.transpose() * ip;
  return lm;
}

std::vector<CMatrix> metric_frame(const LeftInvariantMetric& lm) {
  const GroupModel& g = lm.group;
  const auto basis = g.algebra_basis();
  const auto z = g.z_basis();
  std::vector<Vector> jc;
  for (const CMatrix& j : lm.j) jc.push_back(g.coordinates(j));
  std::vector<CMatrix> frame;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CMatrix x = basis[i];
    for (int k = 0; k < g.r; ++k) x -= jc[k](static_cast<Eigen::Index>(i)) * z[k];
    frame.push_back(x);
  }
  return frame;
}

double frame_gram_residual(const LeftInvariantMetric& lm) {
  const auto frame = metric_frame(lm);
  const Eigen::Index d = static_cast<Eigen::Index>(frame.size());
  Matrix c(d, d);
  for (Eigen::Index i = 0; i < d; ++i) c.col(i) = lm.group.coordinates(frame[i]);
  const Matrix gram = c.transpose() * lm.gram * c;
  return (gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

const char* representation_name(Representation r) { return r == Representation::Defining ? "defining" : "adjoint"; }

CMatrix block_operator(const GroupModel& g, const std::vector<CMatrix>& frame, Representation rep) {
  if (rep == Representation::Defining) {
    const int n = g.size();
    CMatrix op = CMatrix::Zero(n, n);
    for (const CMatrix& x : frame) op -= x * x;
    return 0.5 * (op + op.adjoint());
  }
  const auto basis = g.algebra_basis();
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  Matrix op = Matrix::Zero(d, d);
  Matrix ad(d, d);
  for (const CMatrix& x : frame) {
    for (Eigen::Index b = 0; b < d; ++b) ad.col(b) = g.coordinates(liealg::bracket(x, basis[b]));
    op -= ad * ad;
  }
  return (0.5 * (op + op.transpose())).cast<Complex>();
}

std::vector<double> block_laplacian_spectrum(const LeftInvariantMetric& lm, Representation rep) {
  const CMatrix op = block_operator(lm.group, metric_frame(lm), rep);
  if (lm.group.family == GroupFamily::SO || rep == Representation::Adjoint)
    return numkit::sym_eigenvalues(numkit::SymmetricMatrix::from_dense(op.real()));
  return numkit::hermitian_eigenvalues(op);
}

Complex vandermonde_d(const CMatrix& a, const CMatrix& v) {
  const Eigen::Index m = a.rows();
  if (a.cols() != m) throw Error("vandermonde_d: A must be square");
  if (v.rows() != m) throw Error("vandermonde_d: V must have as many rows as A");
  Complex prod = 1.0;
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    CMatrix krylov(m, m);
    CVector w = v.col(c);
    for (Eigen::Index k = 0; k < m; ++k) {
      krylov.col(k) = w;
      w = a * w;
    }
    prod *= krylov.determinant();
  }
  return prod;
}

double group_potential(const CMatrix& x, const GroupPotential& pot, double tol) {
  const Eigen::Index n = x.rows();
  const int m = pot.m;
  if (x.cols() != n || n < 2 * m + 1) throw Error("group_potential: matrix does not fit the block layout");
  if ((x.adjoint() * x - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol ||
      std::abs(x.determinant() - 1.0) > tol)
    throw Error("group_potential: element is not in the group");
  if (pot.family == GroupFamily::SO && x.imag().cwiseAbs().maxCoeff() > tol)
    throw Error("group_potential: SO element has imaginary entries");
  const CMatrix a = x.block(0, 0, m, m), e = x.block(m, m, m, m);
  if (pot.family == GroupFamily::SO) return std::exp(pot.c1 * a.determinant().real() + pot.c2 * e.determinant().real());
  const CMatrix c = x.block(0, 2 * m, m, n - 2 * m), f = x.block(m, 2 * m, m, n - 2 * m);
  const double dac = vandermonde_d(a, c).real(), def = vandermonde_d(e, f).real();
  return std::exp(pot.c1 * a.determinant().real() + pot.c2 * e.determinant().real() - dac * dac - def * def);
}

CMatrix random_group_element(const GroupModel& g, Rng& rng) {
  if (g.family == GroupFamily::SO) return numkit::haar_special_orthogonal(g.size(), rng).cast<Complex>();
  return numkit::haar_special_unitary(g.size(), rng);
}

namespace {

CMatrix random_block(const GroupModel& g, int dim, Rng& rng) {
  if (g.family == GroupFamily::SO) return numkit::haar_special_orthogonal(dim, rng).cast<Complex>();
  return numkit::haar_special_unitary(dim, rng);
}

CMatrix random_h(const GroupModel& g, Rng& rng) {
  CMatrix h = CMatrix::Identity(g.size(), g.size());
  h.block(0, 0, g.m, g.m) = random_block(g, g.m, rng);
  h.block(g.m, g.m, g.m, g.m) = random_block(g, g.m, rng);
  return h;
}

CMatrix random_p(const GroupModel& g, Rng& rng) {
  const int n = g.size(), k = n - 2 * g.m;
  CMatrix p = CMatrix::Identity(n, n);
  p.block(2 * g.m, 2 * g.m, k, k) = random_block(g, k, rng);
  return p;
}

// exp of a torus element; the z basis is diagonal (SU) or made of disjoint 2x2 blocks (SO).
CMatrix random_t(const GroupModel& g, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const int n = g.size();
  CMatrix t = CMatrix::Identity(n, n);
  if (g.family == GroupFamily::SU) {
    CMatrix x = CMatrix::Zero(n, n);
    for (const CMatrix& z : g.z_basis()) x += angle(rng) * z;
    for (int i = 0; i < n; ++i) t(i, i) = std::exp(x(i, i));
    return t;
  }
  for (int k = 0; k < g.r; ++k) {
    const int a = 2 * g.m + 2 * k;
    const double th = angle(rng);
    t(a, a) = t(a + 1, a + 1) = std::cos(th);
    t(a + 1, a) = std::sin(th);
    t(a, a + 1) = -std::sin(th);
  }
  return t;
}

template <class Transform>
InvarianceReport sample_invariance(const GroupModel& g, const GroupPotential& pot, int samples, std::uint64_t seed,
                                   Transform&& t) {
  Rng rng(seed);
  InvarianceReport rep;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const CMatrix x = random_group_element(g, rng);
    const CMatrix y = t(x, rng);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(group_potential(y, pot) - group_potential(x, pot)));
  }
  return rep;
}

}  // namespace

InvarianceReport check_qlqr_invariance(const GroupModel& g, const GroupPotential& pot, int samples,
                                       std::uint64_t seed) {
  return sample_invariance(g, pot, samples, seed, [&](const CMatrix& x, Rng& rng) {
    const CMatrix q = random_h(g, rng) * random_p(g, rng);
    const CMatrix qp = random_h(g, rng) * random_p(g, rng);
    return CMatrix(q * x * qp);
  });
}

InvarianceReport check_symmetry_group_invariance(const GroupModel& g, const GroupPotential& pot, int samples,
                                                 std::uint64_t seed) {
  if (g.family == GroupFamily::SO) return check_qlqr_invariance(g, pot, samples, seed);
  return sample_invariance(g, pot, samples, seed, [&](const CMatrix& x, Rng& rng) {
    const CMatrix h = random_h(g, rng);
    const CMatrix p = random_p(g, rng);
    const CMatrix t = random_t(g, rng);
    return CMatrix(p * h * x * h.adjoint() * t);
  });
}

InvarianceReport check_h_conjugation_invariance(const GroupModel& g, const GroupPotential& pot, int samples,
                                                std::uint64_t seed) {
  return sample_invariance(g, pot, samples, seed, [&](const CMatrix& x, Rng& rng) {
    const CMatrix h = random_h(g, rng);
    return CMatrix(h * x * h.adjoint());
  });
}

InvarianceReport tau_deviation(const GroupModel& g, const GroupPotential& pot, int samples, std::uint64_t seed) {
  const CMatrix s = g.tau();
  return sample_invariance(g, pot, samples, seed,
                           [&](const CMatrix& x, Rng&) { return CMatrix(s * x * s.adjoint()); });
}

bool HypothesisCertificate::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.pass; });
}

HypothesisCertificate check_group_hypotheses(const GroupModel& g, const jmaps::MapFamily& j1,
                                             const jmaps::MapFamily& j2, const GroupPotential& pot, int samples,
                                             std::uint64_t seed) {
  HypothesisCertificate cert;
  auto add = [&](std::string name, double residual, double tol) {
    cert.checks.push_back({std::move(name), residual, tol, residual <= tol});
  };
  const int m = g.m;
  std::vector<CMatrix> kbasis;
  if (g.family == GroupFamily::SO)
    for (const Matrix& e : liealg::so_basis(m)) kbasis.push_back(e.cast<Complex>());
  else
    kbasis = liealg::su_basis(m);
  const CMatrix zero = CMatrix::Zero(m, m);
  std::vector<CMatrix> hbasis;
  for (const CMatrix& k : kbasis) {
    hbasis.push_back(g.embed_h(k, zero));
    hbasis.push_back(g.embed_h(zero, k));
  }
  const auto z = g.z_basis();

  double bracket = 0.0, ortho = 0.0;
  for (const CMatrix& zk : z)
    for (const CMatrix& h : hbasis) {
      bracket = std::max(bracket, liealg::bracket(zk, h).cwiseAbs().maxCoeff());
      ortho = std::max(ortho, std::abs(g.g0(zk, h)));
    }
  add("[z,h]=0", bracket, 1e-14);
  add("z perp h", ortho, 1e-14);

  const CMatrix s = g.tau();
  const auto basis = g.algebra_basis();
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  Matrix ad_tau(d, d);
  for (Eigen::Index b = 0; b < d; ++b) ad_tau.col(b) = g.coordinates(s * basis[b] * s.adjoint());
  add("tau is a g0-isometry", (ad_tau.transpose() * ad_tau - Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-13);

  double fix = 0.0;
  for (const CMatrix& zk : z) fix = std::max(fix, (s * zk * s.adjoint() - zk).cwiseAbs().maxCoeff());
  add("tau fixes T", fix, 1e-14);

  double swap = 0.0;
  for (const CMatrix& k : kbasis) {
    swap = std::max(swap, (s * g.embed_h(k, zero) * s.adjoint() - g.embed_h(zero, k)).cwiseAbs().maxCoeff());
    swap = std::max(swap, (s * g.embed_h(zero, k) * s.adjoint() - g.embed_h(k, zero)).cwiseAbs().maxCoeff());
  }
  add("tau_* swaps the k factors", swap, 1e-14);

  add("phi invariant under conjugation by H",
      check_h_conjugation_invariance(g, pot, samples, seed).max_deviation, 1e-12);

  const LeftInvariantMetric lm = make_metric(g, j1, j2);
  const LeftInvariantMetric lmp = make_metric(g, j2, j1);
  add("tau^* lambda^j = lambda^j'", (lm.lambda * ad_tau - lmp.lambda).cwiseAbs().maxCoeff(), 1e-13);
  add("lambda^j vanishes on z and Lambda^2 = 0", (lm.lambda * lm.lambda).cwiseAbs().maxCoeff(), 1e-13);
  return cert;
}

}  // namespace isospec::liegroup

#include "isospec/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace isospec::galerkin {

using geometry::AdmissibleForm;
using geometry::AmbientSpace;
using geometry::Manifold;
using geometry::PotentialField;

const char* boundary_name(Boundary b) {
  switch (b) {
    case Boundary::Sphere: return "sphere";
    case Boundary::BallNeumann: return "ball-neumann";
    case Boundary::BallDirichlet: return "ball-dirichlet";
  }
  return "?";
}

const char* mode_name(AssemblyMode m) { return m == AssemblyMode::Exact ? "exact-moment" : "quadrature"; }

PolyBasis PolyBasis::make(int n, int d, Boundary bc) {
  if (n < 1 || n > kMaxVars) throw Error("basis: unsupported ambient dimension");
  if (d < 0) throw Error("basis: negative degree");
  PolyBasis b;
  b.n = n;
  b.degree = d;
  b.boundary = bc;
  if (bc == Boundary::BallDirichlet) {
    if (d < 2) throw Error("basis: Dirichlet trial space needs degree >= 2");
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    const Polynomial bubble = Polynomial::constant(n, 1.0) - Polynomial::squared_norm(n, all);
    for (const Monomial& a : monomials_up_to(n, d - 2)) {
      b.indices.push_back(a);
      b.functions.push_back(bubble * Polynomial::monomial(n, a));
    }
    return b;
  }
  for (const Monomial& a : monomials_up_to(n, d)) {
    if (bc == Boundary::Sphere && a[n - 1] > 1) continue;
    b.indices.push_back(a);
    b.functions.push_back(Polynomial::monomial(n, a));
  }
  return b;
}

namespace {

// W(beta) = mean(x^beta * w) with w a fixed weight polynomial, cached.
std::uint32_t parity_mask(const Monomial& m) {
  std::uint32_t mask = 0;
  for (int i = 0; i < kMaxVars; ++i) mask |= static_cast<std::uint32_t>(m[i] & 1u) << i;
  return mask;
}

class WeightedMoments {
 public:
  // Odd moments vanish, so only weight terms with the parity of beta contribute.
  WeightedMoments(const MomentTable& table, const Polynomial& w) : table_(table), empty_(w.empty()) {
    for (const auto& [u, c] : w.terms()) buckets_[parity_mask(u)].emplace_back(u, c);
  }

  bool zero() const { return empty_; }

  double operator()(const Monomial& beta) {
    auto it = cache_.find(beta);
    if (it != cache_.end()) return it->second;
    double s = 0.0;
    auto b = buckets_.find(parity_mask(beta));
    if (b != buckets_.end())
      for (const auto& [u, c] : b->second) s += c * table_.mean(monomial_add(beta, u));
    cache_.emplace(beta, s);
    return s;
  }

  double pair(const Polynomial& a, const Polynomial& b) {
    if (empty_) return 0.0;
    double s = 0.0;
    for (const auto& [ma, ca] : a.terms())
      for (const auto& [mb, cb] : b.terms()) s += ca * cb * (*this)(monomial_add(ma, mb));
    return s;
  }

 private:
  const MomentTable& table_;
  bool empty_;
  std::unordered_map<std::uint32_t, std::vector<std::pair<Monomial, double>>> buckets_;
  std::unordered_map<Monomial, double, MonomialHash> cache_;
};

struct ConformalPowers {
  int twice_k = 0;  // 2 * exponent of phi in the stiffness weight
  int twice_m = 0;  // 2 * exponent of phi in the mass weight
};

ConformalPowers conformal_powers(const AmbientSpace& amb) {
  const int n = amb.manifold_dim();
  return {n - 2, n};
}

void check_compatible(const PolyBasis& basis, const AdmissibleForm& form) {
  const AmbientSpace& amb = form.ambient();
  if (amb.dim() != basis.n) throw Error("assemble: basis and form live in different ambient dimensions");
  const bool sphere = amb.manifold == Manifold::Sphere;
  if (sphere != (basis.boundary == Boundary::Sphere)) throw Error("assemble: basis boundary does not match manifold");
}

std::string potential_id(const AssemblyOptions& opt) {
  std::ostringstream os;
  auto show = [&](const char* tag, const PotentialField& p) {
    os << tag << "(slot " << p.slot << ": psi=";
    for (std::size_t i = 0; i < p.psi.size(); ++i) os << (i ? "," : "") << p.psi[i];
    os << ")";
  };
  if (opt.potential) show("potential", *opt.potential);
  if (opt.conformal) show(opt.potential ? " conformal" : "conformal", *opt.conformal);
  return os.str();
}

GalerkinPencil blank_pencil(const PolyBasis& basis, const AdmissibleForm& form, const AssemblyOptions& opt) {
  GalerkinPencil p;
  p.mode = opt.mode;
  p.n = basis.n;
  p.degree = basis.degree;
  p.boundary = basis.boundary;
  p.form_id = form.describe();
  p.potential_id = potential_id(opt);
  return p;
}

GalerkinPencil assemble_exact(const PolyBasis& basis, const AdmissibleForm& form, const AssemblyOptions& opt) {
  const AmbientSpace& amb = form.ambient();
  const int n = basis.n, r = amb.r;
  const std::size_t nb = basis.size();
  const bool sphere = basis.boundary == Boundary::Sphere;
  const MomentTable table(basis.domain(), n);

  Polynomial wk = Polynomial::constant(n, 1.0), wm = wk;
  if (opt.conformal) {
    const ConformalPowers pw = conformal_powers(amb);
    if (pw.twice_k % 2 || pw.twice_m % 2) {
      std::ostringstream os;
      os << "exact mode needs polynomial integrands, but the conformal factor enters as phi^(" << pw.twice_k
         << "/2) and phi^(" << pw.twice_m << "/2) in dimension " << amb.manifold_dim() << "; use quadrature mode";
      throw Error(os.str());
    }
    const Polynomial phi = opt.conformal->polynomial(amb);
    wk = phi.pow(pw.twice_k / 2);
    wm = phi.pow(pw.twice_m / 2);
  }

  const auto lam = form.polynomial_components();
  std::vector<Polynomial> xs(n);
  for (int a = 0; a < n; ++a) xs[a] = Polynomial::variable(n, a);
  if (sphere) {
    for (int k = 0; k < r; ++k) {
      Polynomial dot(n);
      for (int a = 0; a < n; ++a) dot += xs[a] * lam[k][a];
      if (prune(dot, 1e-12).max_abs_coefficient() > 1e-12 * (1.0 + dot.max_abs_coefficient()))
        throw Error("assemble: form is not orthogonal to the position vector on the sphere");
    }
  }

  // G_k x as polynomial vector fields.
  std::vector<std::vector<Polynomial>> gx(r, std::vector<Polynomial>(n, Polynomial(n)));
  for (int k = 0; k < r; ++k) {
    const Matrix g = amb.generator(k);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (g(a, b) != 0.0) gx[k][a] += xs[b] * g(a, b);
  }

  std::vector<std::vector<Polynomial>> grad(nb, std::vector<Polynomial>(n));
  std::vector<std::vector<Polynomial>> zf(nb, std::vector<Polynomial>(r, Polynomial(n)));
  std::vector<Polynomial> ef(nb, Polynomial(n));
  for (std::size_t i = 0; i < nb; ++i) {
    for (int a = 0; a < n; ++a) grad[i][a] = basis.functions[i].derivative(a);
    for (int a = 0; a < n; ++a) {
      if (grad[i][a].empty()) continue;
      for (int k = 0; k < r; ++k)
        if (!gx[k][a].empty()) zf[i][k] += gx[k][a] * grad[i][a];
      if (sphere) ef[i] += xs[a] * grad[i][a];
    }
  }

  WeightedMoments w0(table, wk);
  std::vector<WeightedMoments> wl;
  for (int k = 0; k < r; ++k)
    for (int a = 0; a < n; ++a) wl.emplace_back(table, wk * lam[k][a]);
  std::vector<WeightedMoments> wg;
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l) {
      Polynomial gamma(n);
      for (int a = 0; a < n; ++a) gamma += lam[k][a] * lam[l][a];
      wg.emplace_back(table, wk * gamma);
    }

  // Cross term T_ij = sum_{k,a} int w0 lambda_ka (Z_k f_i) d_a f_j.
  Matrix t = Matrix::Zero(nb, nb);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (int k = 0; k < r; ++k)
        for (int a = 0; a < n; ++a) {
          WeightedMoments& w = wl[k * n + a];
          if (w.zero() || grad[j][a].empty() || zf[i][k].empty()) continue;
          t(i, j) += w.pair(zf[i][k], grad[j][a]);
        }

  Matrix kmat(nb, nb), mmat(nb, nb), pmat;
  WeightedMoments wmass(table, wm);
  std::optional<WeightedMoments> wpot;
  if (opt.potential) {
    wpot.emplace(table, wm * opt.potential->polynomial(amb));
    pmat.resize(nb, nb);
  }
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i; j < nb; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += w0.pair(grad[i][a], grad[j][a]);
      if (sphere) s -= w0.pair(ef[i], ef[j]);
      s -= t(i, j) + t(j, i);
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) s += wg[k * r + l].pair(zf[i][k], zf[j][l]);
      kmat(i, j) = kmat(j, i) = s;
      mmat(i, j) = mmat(j, i) = wmass.pair(basis.functions[i], basis.functions[j]);
      if (wpot) pmat(i, j) = pmat(j, i) = wpot->pair(basis.functions[i], basis.functions[j]);
    }

  GalerkinPencil out = blank_pencil(basis, form, opt);
  out.k = numkit::SymmetricMatrix::from_dense(kmat);
  out.m = numkit::SymmetricMatrix::from_dense(mmat);
  if (opt.potential) out.p = numkit::SymmetricMatrix::from_dense(pmat);
  return out;
}

std::vector<GalerkinPencil> assemble_quadrature(const PolyBasis& basis, const AdmissibleForm& form,
                                                const AssemblyOptions& opt) {
  const AmbientSpace& amb = form.ambient();
  const int n = basis.n, r = amb.r;
  const Eigen::Index nb = static_cast<Eigen::Index>(basis.size());
  const bool sphere = basis.boundary == Boundary::Sphere;
  if (opt.checkpoints.empty()) throw Error("quadrature: no sample checkpoints");
  std::int64_t prev = 0;
  for (std::int64_t c : opt.checkpoints) {
    if (c <= prev || c % 2) throw Error("quadrature: checkpoints must be increasing and even");
    prev = c;
  }

  std::vector<CompiledPolynomial> f(nb);
  std::vector<std::vector<CompiledPolynomial>> df(nb, std::vector<CompiledPolynomial>(n));
  int maxdeg = 1;
  for (Eigen::Index i = 0; i < nb; ++i) {
    f[i] = CompiledPolynomial(basis.functions[i]);
    maxdeg = std::max(maxdeg, f[i].degree());
    for (int a = 0; a < n; ++a) df[i][a] = CompiledPolynomial(basis.functions[i].derivative(a));
  }
  std::vector<Matrix> gens;
  for (int k = 0; k < r; ++k) gens.push_back(amb.generator(k));
  const ConformalPowers pw = conformal_powers(amb);

  constexpr Eigen::Index kBatch = 256;  // points per batch, always a multiple of 2
  Matrix bk(nb, kBatch * n), bm(nb, kBatch), bp(nb, kBatch);
  Vector pw_weights(kBatch);
  Matrix kacc = Matrix::Zero(nb, nb), macc = Matrix::Zero(nb, nb), pacc = Matrix::Zero(nb, nb);

  Rng rng(opt.seed);
  std::vector<GalerkinPencil> out;
  std::int64_t done = 0;
  Matrix grads(n, nb), gxm(n, r);
  for (std::int64_t target : opt.checkpoints) {
    while (done < target) {
      const Eigen::Index count = static_cast<Eigen::Index>(std::min<std::int64_t>(kBatch, target - done));
      for (Eigen::Index s = 0; s < count; s += 2) {
        const Vector base = geometry::sample_point(amb, rng);
        for (int sign = 0; sign < 2; ++sign) {
          const Vector x = sign ? Vector(-base) : base;
          const Eigen::Index col = s + sign;
          const Matrix pt = power_table(x, maxdeg);
          double wk = 1.0, wmass = 1.0;
          if (opt.conformal) {
            const double phi = opt.conformal->evaluate(amb, x);
            if (phi <= 0.0) throw Error("quadrature: conformal factor must be positive");
            wk = std::pow(phi, 0.5 * pw.twice_k);
            wmass = std::pow(phi, 0.5 * pw.twice_m);
          }
          for (Eigen::Index i = 0; i < nb; ++i) {
            const double v = f[i].evaluate(pt);
            bm(i, col) = std::sqrt(wmass) * v;
            bp(i, col) = v;
            for (int a = 0; a < n; ++a) grads(a, i) = df[i][a].evaluate(pt);
          }
          if (sphere) grads -= x * (x.transpose() * grads);
          for (int k = 0; k < r; ++k) gxm.col(k) = gens[k] * x;
          const Matrix cov = form.covectors(x);  // r x N
          const Matrix metric_grads = grads - cov.transpose() * (gxm.transpose() * grads);
          bk.middleCols(col * n, n) = std::sqrt(wk) * metric_grads.transpose();
          pw_weights(col) = opt.potential ? wmass * opt.potential->evaluate(amb, x) : 0.0;
        }
      }
      kacc.selfadjointView<Eigen::Lower>().rankUpdate(bk.leftCols(count * n));
      macc.selfadjointView<Eigen::Lower>().rankUpdate(bm.leftCols(count));
      if (opt.potential)
        pacc.noalias() += bp.leftCols(count) * pw_weights.head(count).asDiagonal() * bp.leftCols(count).transpose();
      done += count;
    }
    GalerkinPencil p = blank_pencil(basis, form, opt);
    p.samples = done;
    p.seed = opt.seed;
    const double inv = 1.0 / static_cast<double>(done);
    const Matrix kd = kacc.selfadjointView<Eigen::Lower>();
    const Matrix md = macc.selfadjointView<Eigen::Lower>();
    p.k = numkit::SymmetricMatrix::from_dense(inv * kd);
    p.m = numkit::SymmetricMatrix::from_dense(inv * md);
    if (opt.potential) p.p = numkit::SymmetricMatrix::from_dense(inv * 0.5 * (pacc + pacc.transpose()));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::vector<GalerkinPencil> assemble_all(const PolyBasis& basis, const AdmissibleForm& form,
                                         const AssemblyOptions& opt) {
  check_compatible(basis, form);
  if (opt.mode == AssemblyMode::Exact) return {assemble_exact(basis, form, opt)};
  return assemble_quadrature(basis, form, opt);
}

GalerkinPencil assemble(const PolyBasis& basis, const AdmissibleForm& form, const AssemblyOptions& opt) {
  return assemble_all(basis, form, opt).back();
}

numkit::PencilSpectrum pencil_spectrum(const GalerkinPencil& p, double hbar) {
  numkit::SymmetricMatrix a = p.k;
  a *= hbar * hbar;
  if (p.p) a += *p.p;
  return numkit::pencil_eigen(a, p.m);
}

SpectrumComparison compare_spectra(const std::vector<double>& a, const std::vector<double>& b, double rel_tol) {
  SpectrumComparison c;
  c.rel_tol = rel_tol;
  c.a = a;
  c.b = b;
  std::sort(c.a.begin(), c.a.end());
  std::sort(c.b.begin(), c.b.end());
  if (c.a.size() != c.b.size()) {
    c.max_relative_gap = std::numeric_limits<double>::infinity();
    return c;
  }
  double scale = 0.0;
  for (double v : c.a) scale = std::max(scale, std::abs(v));
  const double floor = 1e-6 * scale;
  for (std::size_t i = 0; i < c.a.size(); ++i) {
    const double den = std::max({std::abs(c.a[i]), std::abs(c.b[i]), floor});
    const double gap = den > 0.0 ? std::abs(c.a[i] - c.b[i]) / den : 0.0;
    c.max_relative_gap = std::max(c.max_relative_gap, gap);
  }
  c.pass = c.max_relative_gap <= rel_tol;
  return c;
}

SpectrumComparison compare_pencils(const GalerkinPencil& a, const GalerkinPencil& b, double hbar, double rel_tol) {
  if (a.n != b.n || a.degree != b.degree || a.boundary != b.boundary || a.k.dim() != b.k.dim())
    throw Error("compare_spectra: pencils use different trial spaces");
  if (a.mode != b.mode) throw Error("compare_spectra: pencils use different assembly modes");
  if (a.mode == AssemblyMode::Quadrature && (a.seed != b.seed || a.samples != b.samples))
    throw Error("compare_spectra: quadrature pencils must share the point set");
  return compare_spectra(pencil_spectrum(a, hbar).eigenvalues, pencil_spectrum(b, hbar).eigenvalues, rel_tol);
}

HeatInvariants heat_invariants(const AmbientSpace& amb, const PotentialField& phi1, const PotentialField& phi2) {
  const RationalPolynomial p1 = phi1.rational_polynomial(amb), p2 = phi2.rational_polynomial(amb);
  const Domain d = amb.domain();
  return {mean_value(p1, d), mean_value(p2, d), mean_value(p1 * p1, d), mean_value(p2 * p2, d)};
}

std::string spectrum_csv(const std::vector<double>& values) {
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  std::string out;
  char buf[64];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out += buf;
  }
  return out;
}

nlohmann::json certificate_json(const std::string& experiment, const GalerkinPencil& p, const SpectrumComparison& c) {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["mode"] = mode_name(p.mode);
  if (p.mode == AssemblyMode::Quadrature) {
    j["samples"] = p.samples;
    j["seed"] = p.seed;
  }
  j["d"] = p.degree;
  j["boundary"] = boundary_name(p.boundary);
  j["basis_size"] = p.k.dim();
  j["gap"] = c.max_relative_gap;
  j["tolerance"] = c.rel_tol;
  j["pass"] = c.pass;
  return j;
}

}  // namespace isospec::galerkin

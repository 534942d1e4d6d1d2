#include "isospec/experiments.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "isospec/galerkin.hpp"
#include "isospec/geometry.hpp"
#include "isospec/jmaps.hpp"
#include "isospec/liegroup.hpp"
#include "isospec/nonisometry.hpp"

namespace isospec::experiments {

using nlohmann::json;
namespace fs = std::filesystem;
using geometry::AdmissibleForm;
using geometry::AmbientSpace;
using geometry::FormKind;
using geometry::Manifold;
using geometry::PotentialField;
using geometry::Variant;
using jmaps::MapFamily;

namespace {

enum class Kind { Ex46, Ex410, Ex44, SOGroup, SUGroup };

struct Entry {
  ExperimentInfo info;
  Kind kind;
  Manifold manifold = Manifold::Sphere;
  bool scaled = false;
  int default_degree = 2;
  std::vector<double> default_psi{2.0, -1.0};
  bool conformal_quadrature = false;
};

const char* kEx46 =
    "Cross-product forms on R^3+R^3+C^2 built from the explicit isospectral, inequivalent pair c, c' : R^2 -> "
    "Sym0(R^3); lambda = (nu, nu', 0), lambda' = (nu', nu, 0).";
const char* kEx410 =
    "Hopf-lifted forms on C^2+C^2: nu_Z(p) = dP_p^T (c(Z)P(p) x P(p)) with the Hopf map P, c, c' as in the "
    "cross-product case, and the involutions E, E' lifted through SU(2) -> SO(3) to A, A' with A^2 = -Id.";
const char* kEx44 =
    "Linear forms nu_Z(p) = j(Z)p on R^5+R^5+C^2, with j a random so(5) family and j' an isospectral, "
    "inequivalent partner found by Gauss-Newton on the characteristic polynomial constraints.";
const char* kScaled =
    " The forms are multiplied by the radial factor alpha = |p|^2 |q|^2, symmetric in (|p|^2, |q|^2); pointwise "
    "checks are repeated with the compactly supported cutoff max(0, |p|^2+|q|^2 - s0)^3, the support condition "
    "that keeps the scaled forms admissible.";
const char* kManifoldChecks =
    "Isospectrality and genericity of the maps, the intertwining condition for every primitive functional mu with "
    "entries in [-3,3], the swap map tau, exact heat invariants of the potentials, Galerkin pencils for the "
    "Laplacian (g_lambda vs g_lambda'), Schrodinger operators with potentials psi(|p|^2) vs psi(|q|^2) for each "
    "hbar, conformal pairs where the dimension allows exact moments, and curvature-form nonisometry evidence.";

std::vector<Entry> build_catalog() {
  std::vector<Entry> out;
  auto add = [&](std::string name, Kind kind, Manifold mf, bool scaled, int deg, std::vector<double> psi,
                 std::string construction, std::string checks, bool quad = false) {
    Entry e;
    e.info = {std::move(name), std::move(construction), std::move(checks)};
    e.kind = kind;
    e.manifold = mf;
    e.scaled = scaled;
    e.default_degree = deg;
    e.default_psi = std::move(psi);
    e.conformal_quadrature = quad;
    out.push_back(std::move(e));
  };
  const std::vector<double> dec{2.0, -1.0}, inc{1.0, 1.0};
  add("sphere9-ex46", Kind::Ex46, Manifold::Sphere, false, 2, dec, std::string("S^9. ") + kEx46, kManifoldChecks);
  add("ball10-ex46", Kind::Ex46, Manifold::Ball, false, 2, dec, std::string("B^10. ") + kEx46,
      std::string(kManifoldChecks) + " Conformal metrics phi_1 g_lambda vs phi_2 g_lambda use exact moments (even "
                                     "dimension), Dirichlet and Neumann.");
  add("sphere7-ex410", Kind::Ex410, Manifold::Sphere, false, 3, inc, std::string("S^7. ") + kEx410,
      std::string(kManifoldChecks) +
          " Also checks E^2 = E'^2 = Id, the Hopf lift A^2 = A'^2 = -Id and P o A = E o P pointwise; the conformal "
          "pair needs non-integral powers of phi and is run in quadrature mode on a shared antithetic point set "
          "with nested sample counts.",
      true);
  add("ball8-ex410", Kind::Ex410, Manifold::Ball, false, 3, inc, std::string("B^8. ") + kEx410,
      std::string(kManifoldChecks) + " Also checks the Hopf lift A^2 = -Id and P o A = E o P.");
  add("sphere13-ex44", Kind::Ex44, Manifold::Sphere, false, 2, dec, std::string("S^13. ") + kEx44, kManifoldChecks);
  add("ball14-ex44", Kind::Ex44, Manifold::Ball, false, 2, dec, std::string("B^14. ") + kEx44, kManifoldChecks);
  add("so14-group", Kind::SOGroup, Manifold::Sphere, false, 0, {},
      "SO(14) with H = SO(5) x SO(5), T the maximal torus of SO(4), and j = (j1, j2) built from a random so(5) "
      "family j1 and a numerically found isospectral partner j2.",
      "Partner constraint residual, the structural hypotheses ([z,h] = 0, z perp h, tau fixes T and swaps the "
      "factors, tau^* lambda^j = lambda^j'), defining and adjoint block spectra of the left invariant Laplacian for "
      "the swap pair and for (j1, 0) vs (j2, 0), a conjugate positive control, a non-isospectral negative control, "
      "and invariance of the determinant potential under Q_L x Q_R and its non-invariance under tau.");
  add("su9-group", Kind::SUGroup, Manifold::Sphere, false, 0, {},
      "SU(9) with H = SU(3) x SU(3), T the maximal torus of SU(3), j1 a random su(3) family and j2 = S j1 S^-1 "
      "for a random S in SU(3).",
      "Structural hypotheses, block spectra, and symmetries of the determinant potential with the d(A, C) "
      "Krylov-determinant terms: Q_L x Q_R, the group Inn(H) x P_L x T_R, and tau.");
  add("sphere9-ex46-scaled", Kind::Ex46, Manifold::Sphere, true, 2, dec, std::string("S^9. ") + kEx46 + kScaled,
      kManifoldChecks);
  add("ball10-ex46-scaled", Kind::Ex46, Manifold::Ball, true, 2, dec, std::string("B^10. ") + kEx46 + kScaled,
      kManifoldChecks);
  add("sphere7-ex410-scaled", Kind::Ex410, Manifold::Sphere, true, 3, inc, std::string("S^7. ") + kEx410 + kScaled,
      kManifoldChecks);
  add("ball8-ex410-scaled", Kind::Ex410, Manifold::Ball, true, 3, inc, std::string("B^8. ") + kEx410 + kScaled,
      kManifoldChecks);
  return out;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = build_catalog();
  return e;
}

const Entry& find_entry(const std::string& name) {
  for (const Entry& e : entries())
    if (e.info.name == name) return e;
  throw Error("unknown experiment '" + name + "' (see `isospec list`)");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class Recorder {
 public:
  void add(json cert, bool required = true) {
    cert["required"] = required;
    if (required && !cert.value("pass", false)) pass_ = false;
    checks_.push_back(std::move(cert));
  }

  template <class F>
  void timed(const std::string& stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      f();
    } catch (const Error& e) {
      add({{"name", stage}, {"pass", false}, {"error", e.what()}, {"tolerance", nullptr}, {"mode", "n/a"}});
    }
    timing_[stage] = seconds_since(t0);
  }

  void file(const std::string& name, std::string content) { files_[name] = std::move(content); }

  RunReport finish(const ExperimentConfig& cfg) {
    RunReport r;
    r.report["schema"] = kReportSchema;
    r.report["experiment"] = cfg.name;
    r.report["config"] = config_to_json(cfg);
    r.report["checks"] = checks_;
    r.report["pass"] = pass_;
    r.timing["schema"] = "isospec.timing/1";
    r.timing["stages_seconds"] = timing_;
    r.files = std::move(files_);
    r.pass = pass_;
    return r;
  }

 private:
  json checks_ = json::array();
  json timing_ = json::object();
  std::map<std::string, std::string> files_;
  bool pass_ = true;
};

json spectrum_check(const std::string& name, const galerkin::SpectrumComparison& c, const std::string& mode) {
  return {{"name", name},
          {"pass", c.pass},
          {"max_relative_gap", c.max_relative_gap},
          {"tolerance", c.rel_tol},
          {"mode", mode},
          {"size", c.a.size()}};
}

// ---------------------------------------------------------------- manifolds

struct Construction {
  MapFamily f, fp;
  Matrix e, ep;
  AdmissibleForm form;
  AmbientSpace amb;
};

std::string rational_string(const Rational& q) { return q.str(); }

void hopf_lift_checks(Recorder& rec, const Construction& c, std::uint64_t seed) {
  const Matrix id3 = Matrix::Identity(3, 3), id4 = Matrix::Identity(4, 4);
  const double e2 = std::max((c.e * c.e - id3).cwiseAbs().maxCoeff(), (c.ep * c.ep - id3).cwiseAbs().maxCoeff());
  const Matrix& a = c.form.a();
  const Matrix& ap = c.form.ap();
  const double a2 = std::max((a * a + id4).cwiseAbs().maxCoeff(), (ap * ap + id4).cwiseAbs().maxCoeff());
  // A reflection E is lifted through the rotation -E; record both residuals.
  Rng rng(seed);
  std::normal_distribution<double> normal;
  double equiv = 0.0, printed = 0.0;
  for (int s = 0; s < 1000; ++s) {
    Vector p(4);
    for (int i = 0; i < 4; ++i) p(i) = normal(rng);
    const Vector hp = geometry::hopf_map(p);
    for (const auto& [lift, e] : {std::pair<const Matrix*, const Matrix*>{&a, &c.e}, {&ap, &c.ep}}) {
      const Vector lhs = geometry::hopf_map(*lift * p);
      const double sign = e->determinant() < 0 ? -1.0 : 1.0;
      equiv = std::max(equiv, (lhs - sign * *e * hp).cwiseAbs().maxCoeff());
      printed = std::max(printed, (lhs - *e * hp).cwiseAbs().maxCoeff());
    }
  }
  rec.add({{"name", "involutions"}, {"pass", e2 <= 1e-12}, {"residual", e2}, {"tolerance", 1e-12}, {"mode", "exact"}});
  rec.add({{"name", "hopf-lift"},
           {"pass", a2 <= 1e-12 && equiv <= 1e-12},
           {"a_squared_plus_id", a2},
           {"hopf_equivariance_residual", equiv},
           {"hopf_equivariance_residual_printed_sign", printed},
           {"note", "E has determinant -1 and is lifted through -E; E' is a rotation"},
           {"samples", 1000},
           {"tolerance", 1e-12},
           {"mode", "pointwise"}});
}

void pointwise_checks(Recorder& rec, const AdmissibleForm& form, const PotentialField& pot, const ExperimentConfig& cfg,
                      const std::string& suffix) {
  double worst = 0.0;
  int count = 0, failed = 0;
  std::string first_error;
  for (const Vector& mu : geometry::primitive_functionals(form.r(), 3)) {
    ++count;
    try {
      const Matrix f = geometry::f_mu(form, mu);
      const auto st = geometry::check_star_condition(form, form.prime(), mu, f, cfg.star_samples,
                                                     numkit::derive_seed(cfg.seed, 100 + count), &pot);
      worst = std::max({worst, st.residual, st.orthogonality_residual, st.equivariance_residual,
                        st.potential_residual});
      if (!st.pass) ++failed;
    } catch (const Error& e) {
      ++failed;
      if (first_error.empty()) first_error = e.what();
    }
  }
  json star = {{"name", "star-condition" + suffix},
               {"pass", failed == 0},
               {"functionals", count},
               {"failed", failed},
               {"max_residual", worst},
               {"samples_per_functional", cfg.star_samples},
               {"tolerance", 1e-10},
               {"mode", "pointwise"}};
  if (!first_error.empty()) star["error"] = first_error;
  rec.add(star);

  const auto tc = geometry::check_tau(form, cfg.star_samples, numkit::derive_seed(cfg.seed, 99), &pot);
  rec.add({{"name", "tau" + suffix},
           {"pass", tc.pass},
           {"residual", tc.residual},
           {"orthogonality_residual", tc.orthogonality_residual},
           {"equivariance_residual", tc.equivariance_residual},
           {"potential_residual", tc.potential_residual},
           {"tolerance", 1e-10},
           {"mode", "pointwise"}});
}

void pencil_checks(Recorder& rec, const Construction& c, const PotentialField& pot, const ExperimentConfig& cfg,
                   const Entry& entry) {
  using galerkin::AssemblyMode;
  using galerkin::AssemblyOptions;
  using galerkin::Boundary;
  std::vector<Boundary> bcs;
  if (c.amb.manifold == Manifold::Sphere)
    bcs = {Boundary::Sphere};
  else
    bcs = {Boundary::BallNeumann, Boundary::BallDirichlet};
  const PotentialField p1 = pot.with_slot(1), p2 = pot.with_slot(2);
  for (Boundary bc : bcs) {
    const std::string tag = galerkin::boundary_name(bc);
    const int deg = bc == Boundary::BallDirichlet ? cfg.dirichlet_degree : cfg.degree;
    const auto basis = galerkin::PolyBasis::make(c.amb.dim(), deg, bc);
    auto save = [&](const std::string& id, const galerkin::SpectrumComparison& cmp) {
      rec.file("spectra_" + id + "_a.csv", galerkin::spectrum_csv(cmp.a));
      rec.file("spectra_" + id + "_b.csv", galerkin::spectrum_csv(cmp.b));
    };
    rec.timed("laplace-" + tag, [&] {
      const AssemblyOptions opt;
      const auto pa = galerkin::assemble(basis, c.form, opt);
      const auto pb = galerkin::assemble(basis, c.form.prime(), opt);
      const auto cmp = galerkin::compare_pencils(pa, pb, 1.0, cfg.rel_tol);
      json j = spectrum_check("laplace-" + tag, cmp, galerkin::mode_name(pa.mode));
      j["degree"] = deg;
      rec.add(j);
      save("laplace-" + tag, cmp);
    });
    rec.timed("schrodinger-" + tag, [&] {
      AssemblyOptions oa, ob;
      oa.potential = p1;
      ob.potential = p2;
      const auto pa = galerkin::assemble(basis, c.form, oa);
      const auto pb = galerkin::assemble(basis, c.form, ob);
      for (std::size_t h = 0; h < cfg.hbar.size(); ++h) {
        const auto cmp = galerkin::compare_pencils(pa, pb, cfg.hbar[h], cfg.rel_tol);
        const std::string id = "schrodinger-" + tag + "-h" + std::to_string(h);
        json j = spectrum_check(id, cmp, galerkin::mode_name(pa.mode));
        j["hbar"] = cfg.hbar[h];
        j["degree"] = deg;
        rec.add(j);
        save(id, cmp);
      }
    });
    const bool even = c.amb.manifold_dim() % 2 == 0;
    if (even) {
      rec.timed("conformal-" + tag, [&] {
        AssemblyOptions oa, ob;
        oa.conformal = p1;
        ob.conformal = p2;
        const auto pa = galerkin::assemble(basis, c.form, oa);
        const auto pb = galerkin::assemble(basis, c.form, ob);
        const auto cmp = galerkin::compare_pencils(pa, pb, 1.0, cfg.rel_tol);
        json j = spectrum_check("conformal-" + tag, cmp, galerkin::mode_name(pa.mode));
        j["degree"] = deg;
        rec.add(j);
        save("conformal-" + tag, cmp);
      });
    } else if (entry.conformal_quadrature) {
      rec.timed("conformal-quadrature", [&] {
        const auto qbasis = galerkin::PolyBasis::make(c.amb.dim(), cfg.quadrature_degree, bc);
        AssemblyOptions oa;
        oa.mode = AssemblyMode::Quadrature;
        oa.seed = cfg.seed;
        oa.checkpoints = {cfg.samples / 4 / 2 * 2, cfg.samples / 2 / 2 * 2, cfg.samples / 2 * 2};
        AssemblyOptions ob = oa;
        oa.conformal = p1;
        ob.conformal = p2;
        const auto pa = galerkin::assemble_all(qbasis, c.form, oa);
        const auto pb = galerkin::assemble_all(qbasis, c.form, ob);
        json gaps = json::array();
        bool decreasing = true;
        double prev = std::numeric_limits<double>::infinity();
        galerkin::SpectrumComparison last;
        for (std::size_t i = 0; i < pa.size(); ++i) {
          last = galerkin::compare_pencils(pa[i], pb[i], 1.0, cfg.quadrature_tol);
          gaps.push_back({{"samples", pa[i].samples}, {"gap", last.max_relative_gap}});
          if (last.max_relative_gap >= prev) decreasing = false;
          prev = last.max_relative_gap;
        }
        rec.add({{"name", "conformal-quadrature"},
                 {"pass", last.pass && decreasing},
                 {"max_relative_gap", last.max_relative_gap},
                 {"gap_decreasing", decreasing},
                 {"checkpoints", gaps},
                 {"degree", cfg.quadrature_degree},
                 {"size", last.a.size()},
                 {"tolerance", cfg.quadrature_tol},
                 {"mode", "quadrature"},
                 {"note", "approximate: Monte Carlo on a shared antithetic point set"}});
        save("conformal-quadrature", last);
      });
    } else {
      rec.add({{"name", "conformal-" + tag},
               {"pass", true},
               {"skipped", "odd manifold dimension: non-integral powers of phi, no exact moments"},
               {"tolerance", nullptr},
               {"mode", "n/a"}},
              false);
    }
  }
  (void)entry;
}

RunReport run_manifold(const ExperimentConfig& cfg, const Entry& entry) {
  Recorder rec;
  Construction c;
  c.amb.manifold = entry.manifold;
  FormKind kind = FormKind::Cross;
  rec.timed("families", [&] {
    if (entry.kind == Kind::Ex44) {
      kind = FormKind::Linear;
      c.amb = {Variant::RmRmCr, 5, 2, entry.manifold};
      c.f = jmaps::random_so_family(5, 2, numkit::derive_seed(cfg.seed, 1));
      jmaps::PartnerOptions po;
      po.seed = numkit::derive_seed(cfg.seed, 2);
      po.equivalence_threshold = cfg.nonisometry_threshold;
      const auto pr = jmaps::find_isospectral_partner(c.f, po);
      rec.add({{"name", "partner"},
               {"pass", pr.success && pr.constraint_residual <= 1e-10},
               {"constraint_residual", pr.constraint_residual},
               {"equivalence_residual", pr.equivalence_residual},
               {"attempts", pr.attempts},
               {"message", pr.message},
               {"tolerance", 1e-10},
               {"mode", "gauss-newton"}});
      c.fp = pr.partner;
    } else {
      const auto d = jmaps::paper_cmaps();
      c.f = d.c;
      c.fp = d.cp;
      c.e = d.e;
      c.ep = d.ep;
      if (entry.kind == Kind::Ex410) {
        kind = FormKind::Hopf;
        c.amb = {Variant::CmCm, 2, 2, entry.manifold};
      } else {
        c.amb = {Variant::RmRmCr, 3, 2, entry.manifold};
      }
    }
    if (cfg.perturb != 0.0) c.fp = jmaps::perturb_second_image(c.fp, cfg.perturb);
    switch (kind) {
      case FormKind::Linear: c.form = AdmissibleForm::linear(c.amb, c.f, c.fp); break;
      case FormKind::Cross: c.form = AdmissibleForm::cross(c.amb, c.f, c.fp); break;
      case FormKind::Hopf: c.form = AdmissibleForm::hopf(c.amb, c.f, c.fp, c.e, c.ep); break;
    }
    if (entry.scaled) c.form = c.form.scaled(geometry::ScaleSpec::product_pq());
  });
  if (c.f.r() == 0) return rec.finish(cfg);

  rec.timed("maps", [&] {
    const auto iso = jmaps::check_isospectral(c.f, c.fp);
    rec.add({{"name", "isospectral-maps"},
             {"pass", iso.pass},
             {"grid_residual", iso.grid_residual},
             {"polynomial_residual", iso.polynomial_residual},
             {"grid_points", iso.grid_points},
             {"inconclusive", iso.inconclusive},
             {"tolerance", 1e-10},
             {"mode", "exact-invariants"}});
    const auto g1 = jmaps::check_genericity(c.f, jmaps::GenericityMode::Centralizer);
    const auto g2 = jmaps::check_genericity(c.fp, jmaps::GenericityMode::Centralizer);
    rec.add({{"name", "genericity"},
             {"pass", g1.pass && g2.pass},
             {"centralizer_dim", g1.dimension},
             {"centralizer_dim_prime", g2.dimension},
             {"tolerance", 1e-10},
             {"mode", "rank"}});
    if (kind == FormKind::Hopf) hopf_lift_checks(rec, c, numkit::derive_seed(cfg.seed, 3));
  });

  const PotentialField pot{cfg.psi, 1};
  rec.timed("pointwise", [&] {
    pointwise_checks(rec, c.form, pot, cfg, "");
    if (entry.scaled) {
      const AdmissibleForm cut = c.form.scaled(geometry::ScaleSpec::cutoff(0.5, 3));
      AdmissibleForm base = cut;
      pointwise_checks(rec, base, pot, cfg, "-cutoff");
    }
  });

  rec.timed("heat-invariants", [&] {
    const auto h = galerkin::heat_invariants(c.amb, pot.with_slot(1), pot.with_slot(2));
    rec.add({{"name", "heat-invariants"},
             {"pass", h.pass()},
             {"mean_phi1", rational_string(h.mean1)},
             {"mean_phi2", rational_string(h.mean2)},
             {"mean_phi1_squared", rational_string(h.square_mean1)},
             {"mean_phi2_squared", rational_string(h.square_mean2)},
             {"tolerance", 0},
             {"mode", "exact-rational"}});
  });

  pencil_checks(rec, c, pot, cfg, entry);

  rec.timed("nonisometry", [&] {
    nonisometry::SearchOptions so;
    so.restarts = cfg.nonisometry_restarts;
    so.seed = numkit::derive_seed(cfg.seed, 4);
    so.threshold = cfg.nonisometry_threshold;
    const auto rep = nonisometry::curvature_condition_report(c.form, so);
    json j = nonisometry::to_json(rep);
    j["name"] = "nonisometry-evidence";
    j["pass"] = rep.verdict == "evidence-nonisometric";
    j["tolerance"] = cfg.nonisometry_threshold;
    j["mode"] = "search";
    j["restarts"] = cfg.nonisometry_restarts;
    rec.add(j);
  });
  return rec.finish(cfg);
}

// ------------------------------------------------------------------- groups

double block_gap(const liegroup::LeftInvariantMetric& a, const liegroup::LeftInvariantMetric& b,
                 liegroup::Representation rep, galerkin::SpectrumComparison* out = nullptr) {
  const auto cmp = galerkin::compare_spectra(liegroup::block_laplacian_spectrum(a, rep),
                                             liegroup::block_laplacian_spectrum(b, rep), 1.0);
  if (out) *out = cmp;
  return cmp.max_relative_gap;
}

RunReport run_group(const ExperimentConfig& cfg, const Entry& entry) {
  using liegroup::Representation;
  Recorder rec;
  const bool so = entry.kind == Kind::SOGroup;
  const liegroup::GroupModel g{so ? liegroup::GroupFamily::SO : liegroup::GroupFamily::SU, so ? 5 : 3, 2};
  const liegroup::GroupPotential pot{g.family, g.m, cfg.c1, cfg.c2};
  if (!(cfg.c1 > cfg.c2 && cfg.c2 > 0)) throw Error("group potential needs c1 > c2 > 0");
  MapFamily j1, j2, jc, jr;
  rec.timed("families", [&] {
    if (so) {
      j1 = jmaps::random_so_family(g.m, g.r, numkit::derive_seed(cfg.seed, 1));
      jmaps::PartnerOptions po;
      po.seed = numkit::derive_seed(cfg.seed, 2);
      po.equivalence_threshold = cfg.nonisometry_threshold;
      const auto pr = jmaps::find_isospectral_partner(j1, po);
      rec.add({{"name", "partner"},
               {"pass", pr.success && pr.constraint_residual <= 1e-10},
               {"constraint_residual", pr.constraint_residual},
               {"equivalence_residual", pr.equivalence_residual},
               {"attempts", pr.attempts},
               {"tolerance", 1e-10},
               {"mode", "gauss-newton"}});
      j2 = pr.partner;
      jc = jmaps::conjugate_family(j1, numkit::haar_special_orthogonal(g.m, numkit::derive_seed(cfg.seed, 3)));
      jr = jmaps::random_so_family(g.m, g.r, numkit::derive_seed(cfg.seed, 4));
      if (cfg.perturb != 0.0) j2 = jmaps::perturb_second_image(j2, cfg.perturb);
    } else {
      if (cfg.perturb != 0.0) throw Error("--perturb is not defined for su families");
      j1 = jmaps::random_su_family(g.m, g.r, numkit::derive_seed(cfg.seed, 1));
      Rng rng(numkit::derive_seed(cfg.seed, 3));
      j2 = jmaps::conjugate_family(j1, numkit::haar_special_unitary(g.m, rng));
      jc = j2;
      jr = jmaps::random_su_family(g.m, g.r, numkit::derive_seed(cfg.seed, 4));
    }
  });
  if (j1.r() == 0) return rec.finish(cfg);

  rec.timed("hypotheses", [&] {
    const auto cert = liegroup::check_group_hypotheses(g, j1, j2, pot, 200, numkit::derive_seed(cfg.seed, 5));
    json sub = json::array();
    for (const auto& c : cert.checks)
      sub.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    rec.add({{"name", "group-hypotheses"}, {"pass", cert.pass()}, {"checks", sub}, {"tolerance", "per check"},
             {"mode", "exact"}});
    const auto lm = liegroup::make_metric(g, j1, j2);
    const double gram = liegroup::frame_gram_residual(lm);
    rec.add({{"name", "metric-frame"}, {"pass", gram <= 1e-12}, {"gram_residual", gram}, {"tolerance", 1e-12},
             {"mode", "exact"}});
  });

  const MapFamily zero = so ? jmaps::make_real_family(liealg::Algebra::SO, std::vector<Matrix>(g.r, Matrix::Zero(g.m, g.m)))
                            : jmaps::make_su_family(std::vector<CMatrix>(g.r, CMatrix::Zero(g.m, g.m)));
  rec.timed("block-spectra", [&] {
    const auto swap_a = liegroup::make_metric(g, j1, j2), swap_b = liegroup::make_metric(g, j2, j1);
    const auto pair_a = liegroup::make_metric(g, j1, zero), pair_b = liegroup::make_metric(g, j2, zero);
    const auto pos_b = liegroup::make_metric(g, jc, zero), neg_b = liegroup::make_metric(g, jr, zero);
    double neg = 0.0;
    for (Representation rep : {Representation::Defining, Representation::Adjoint}) {
      const std::string rn = liegroup::representation_name(rep);
      galerkin::SpectrumComparison cmp;
      double gap = block_gap(swap_a, swap_b, rep, &cmp);
      rec.add({{"name", "block-spectra-swap-" + rn}, {"pass", gap <= cfg.group_tol}, {"max_relative_gap", gap},
               {"tolerance", cfg.group_tol}, {"mode", "exact-operator"}, {"size", cmp.a.size()}});
      rec.file("spectra_swap_" + rn + "_a.csv", galerkin::spectrum_csv(cmp.a));
      rec.file("spectra_swap_" + rn + "_b.csv", galerkin::spectrum_csv(cmp.b));
      gap = block_gap(pair_a, pair_b, rep, &cmp);
      rec.add({{"name", "block-spectra-pair-" + rn}, {"pass", gap <= cfg.group_tol}, {"max_relative_gap", gap},
               {"tolerance", cfg.group_tol}, {"mode", "exact-operator"}, {"size", cmp.a.size()}});
      rec.file("spectra_pair_" + rn + "_a.csv", galerkin::spectrum_csv(cmp.a));
      rec.file("spectra_pair_" + rn + "_b.csv", galerkin::spectrum_csv(cmp.b));
      gap = block_gap(pair_a, pos_b, rep);
      rec.add({{"name", "block-spectra-conjugate-control-" + rn}, {"pass", gap <= 1e-12}, {"max_relative_gap", gap},
               {"tolerance", 1e-12}, {"mode", "exact-operator"}});
      neg = std::max(neg, block_gap(pair_a, neg_b, rep));
    }
    rec.add({{"name", "block-spectra-negative-control"},
             {"pass", neg >= 1e-3},
             {"max_relative_gap", neg},
             {"note", "maximum over defining and adjoint; the defining block only sees |j(Z_k)|"},
             {"tolerance", 1e-3},
             {"mode", "exact-operator"}});
  });

  rec.timed("potential", [&] {
    const auto q = liegroup::check_qlqr_invariance(g, pot, cfg.group_samples, numkit::derive_seed(cfg.seed, 6));
    json qj = {{"name", "potential-qlqr-invariance"}, {"pass", q.max_deviation <= 1e-12},
               {"max_deviation", q.max_deviation}, {"samples", q.samples}, {"tolerance", 1e-12},
               {"mode", "sampled"}};
    if (!so) {
      qj["note"] =
          "the d(A,C), d(E,F) terms are not invariant under left translation by H or right translation by P; "
          "see potential-symmetry-group-invariance";
      qj["known_defect"] = true;
    }
    rec.add(qj, so);
    if (!so) {
      const auto s =
          liegroup::check_symmetry_group_invariance(g, pot, cfg.group_samples, numkit::derive_seed(cfg.seed, 7));
      rec.add({{"name", "potential-symmetry-group-invariance"}, {"group", "Inn(H) x P_L x T_R"},
               {"pass", s.max_deviation <= 1e-12}, {"max_deviation", s.max_deviation}, {"samples", s.samples},
               {"tolerance", 1e-12}, {"mode", "sampled"}});
    }
    const auto t = liegroup::tau_deviation(g, pot, cfg.group_samples, numkit::derive_seed(cfg.seed, 8));
    rec.add({{"name", "potential-tau-non-invariance"}, {"pass", t.max_deviation >= 0.1},
             {"max_deviation", t.max_deviation}, {"samples", t.samples}, {"tolerance", 0.1}, {"mode", "sampled"}});
  });
  return rec.finish(cfg);
}

}  // namespace

const std::vector<ExperimentInfo>& catalog() {
  static const std::vector<ExperimentInfo> c = [] {
    std::vector<ExperimentInfo> out;
    for (const Entry& e : entries()) out.push_back(e.info);
    return out;
  }();
  return c;
}

const ExperimentInfo& find_experiment(const std::string& name) { return find_entry(name).info; }

std::string describe(const std::string& name) {
  const Entry& e = find_entry(name);
  std::ostringstream os;
  os << e.info.name << "\n\nConstruction: " << e.info.construction << "\n\nChecks: " << e.info.checks << "\n";
  if (e.default_degree > 0) {
    os << "\nDefaults: degree " << e.default_degree << ", potential profile psi(s) =";
    for (std::size_t i = 0; i < e.default_psi.size(); ++i) os << (i ? " + " : " ") << e.default_psi[i] << "*s^" << i;
    os << "\n";
  }
  return os.str();
}

ExperimentConfig default_config(const std::string& name) {
  const Entry& e = find_entry(name);
  ExperimentConfig c;
  c.name = name;
  c.degree = e.default_degree;
  c.dirichlet_degree = e.default_degree + 2;
  c.psi = e.default_psi;
  return c;
}

void validate(const ExperimentConfig& c) {
  find_entry(c.name);
  const Entry& e = find_entry(c.name);
  auto positive = [](double v, const char* what) {
    if (!(v > 0)) throw Error(std::string("config: ") + what + " must be positive");
  };
  positive(c.rel_tol, "rel_tol");
  positive(c.quadrature_tol, "quadrature_tol");
  positive(c.group_tol, "group_tol");
  positive(c.nonisometry_threshold, "nonisometry_threshold");
  if (c.samples < 8) throw Error("config: samples must be at least 8");
  if (c.star_samples < 1 || c.group_samples < 1 || c.nonisometry_restarts < 1)
    throw Error("config: sample and restart counts must be positive");
  if (e.default_degree > 0) {
    if (c.degree < 1) throw Error("config: degree must be at least 1");
    if (c.dirichlet_degree < 2) throw Error("config: dirichlet_degree must be at least 2");
    if (c.quadrature_degree < 1) throw Error("config: quadrature_degree must be at least 1");
    if (c.psi.empty()) throw Error("config: psi must have at least one coefficient");
    if (c.hbar.empty()) throw Error("config: hbar list is empty");
    for (double h : c.hbar) positive(h, "hbar");
  }
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw Error("config: expected a JSON object");
  if (j.contains("schema") && j["schema"] != kConfigSchema)
    throw Error("config: unsupported schema '" + j["schema"].dump() + "', expected " + kConfigSchema);
  static const std::vector<std::string> known = {
      "schema", "experiment", "degree", "dirichlet_degree", "quadrature_degree", "seed", "samples", "out",
      "perturb", "hbar", "psi", "rel_tol", "quadrature_tol", "group_tol", "nonisometry_threshold",
      "nonisometry_restarts", "star_samples", "group_samples", "c1", "c2"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw Error("config: unknown key '" + k + "'");
  try {
    if (j.contains("experiment")) {
      const std::string name = j["experiment"].get<std::string>();
      if (name != c.name) {
        ExperimentConfig d = default_config(name);
        d.out_dir = c.out_dir;
        c = d;
      }
    }
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("degree", c.degree);
    get("dirichlet_degree", c.dirichlet_degree);
    get("quadrature_degree", c.quadrature_degree);
    get("seed", c.seed);
    get("samples", c.samples);
    get("out", c.out_dir);
    get("perturb", c.perturb);
    get("hbar", c.hbar);
    get("psi", c.psi);
    get("rel_tol", c.rel_tol);
    get("quadrature_tol", c.quadrature_tol);
    get("group_tol", c.group_tol);
    get("nonisometry_threshold", c.nonisometry_threshold);
    get("nonisometry_restarts", c.nonisometry_restarts);
    get("star_samples", c.star_samples);
    get("group_samples", c.group_samples);
    get("c1", c.c1);
    get("c2", c.c2);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return {{"schema", kConfigSchema},
          {"experiment", c.name},
          {"degree", c.degree},
          {"dirichlet_degree", c.dirichlet_degree},
          {"quadrature_degree", c.quadrature_degree},
          {"seed", c.seed},
          {"samples", c.samples},
          {"perturb", c.perturb},
          {"hbar", c.hbar},
          {"psi", c.psi},
          {"rel_tol", c.rel_tol},
          {"quadrature_tol", c.quadrature_tol},
          {"group_tol", c.group_tol},
          {"nonisometry_threshold", c.nonisometry_threshold},
          {"nonisometry_restarts", c.nonisometry_restarts},
          {"star_samples", c.star_samples},
          {"group_samples", c.group_samples},
          {"c1", c.c1},
          {"c2", c.c2}};
}

RunReport run(const ExperimentConfig& cfg) {
  validate(cfg);
  const Entry& e = find_entry(cfg.name);
  if (e.kind == Kind::SOGroup || e.kind == Kind::SUGroup) return run_group(cfg, e);
  return run_manifold(cfg, e);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

void write_outputs(const RunReport& r, const ExperimentConfig& cfg) {
  const fs::path dir = fs::path(cfg.out_dir) / cfg.name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create '" + dir.string() + "': " + ec.message());
  write_file_atomic((dir / "report.json").string(), r.report.dump(2) + "\n");
  write_file_atomic((dir / "timing.json").string(), r.timing.dump(2) + "\n");
  for (const auto& [name, content] : r.files) write_file_atomic((dir / name).string(), content);
}

}  // namespace isospec::experiments

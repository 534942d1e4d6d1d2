#include "isospec/nonisometry.hpp"

#include <cmath>
#include <limits>

namespace isospec::nonisometry {

using jmaps::MapFamily;

const char* equation_name(Equation e) {
  switch (e) {
    case Equation::Eq2So: return "eq2-so";
    case Equation::Eq2Sym: return "eq2-sym";
    case Equation::Eq4: return "eq4";
  }
  return "?";
}

namespace {

void require_orthogonal(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || (a.transpose() * a - Matrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(std::string("equation_residual: ") + what + " is not orthogonal");
}

// sum_k || dst(C Z_k) - A src(Z_k) A^T ||^2
double squared_defect(const MapFamily& src, const MapFamily& dst, const Matrix& a, const Matrix& c) {
  double s = 0.0;
  for (int k = 0; k < src.r(); ++k) s += (dst.at(c.col(k)) - a * src.images[k] * a.transpose()).squaredNorm();
  return s;
}

double sign_of_det(const Matrix& a) { return a.determinant() < 0 ? -1.0 : 1.0; }

}  // namespace

double equation_residual(const MapFamily& f, const MapFamily& fp, Equation eq, const Candidate& c) {
  if (f.is_complex() || fp.is_complex()) throw Error("equation_residual: real algebras only");
  require_orthogonal(c.a, "A");
  require_orthogonal(c.psi, "Psi");
  const Matrix pt = c.psi.transpose();
  switch (eq) {
    case Equation::Eq2So:
      require_orthogonal(c.ap, "A'");
      return std::sqrt(squared_defect(f, fp, c.a, pt) + squared_defect(fp, f, c.ap, pt));
    case Equation::Eq2Sym:
      require_orthogonal(c.ap, "A'");
      return std::sqrt(squared_defect(f, fp, c.a, sign_of_det(c.a) * pt) +
                       squared_defect(fp, f, c.ap, sign_of_det(c.ap) * pt));
    case Equation::Eq4: return std::sqrt(squared_defect(f, fp, c.a, sign_of_det(c.a) * c.psi));
  }
  return 0.0;
}

std::vector<Matrix> psi_candidates(Equation eq) {
  std::vector<Matrix> out;
  for (int swap = 0; swap < (eq == Equation::Eq4 ? 1 : 2); ++swap)
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) {
        Matrix p = Matrix::Zero(2, 2);
        if (swap) {
          p(0, 1) = s1;
          p(1, 0) = s2;
        } else {
          p(0, 0) = s1;
          p(1, 1) = s2;
        }
        out.push_back(p);
      }
  return out;
}

namespace {

// Best A for dst(C Z) = A src(Z) A^T with C fixed up to the sign tied to det A
// (signed = true) or free det (signed = false).
jmaps::FitResult fit_one(const MapFamily& src, const MapFamily& dst, const Matrix& c, bool signed_c,
                         const SearchOptions& opt, std::uint64_t stream) {
  jmaps::FitResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int s : signed_c ? std::vector<int>{1, -1} : std::vector<int>{0}) {
    jmaps::FitOptions fo;
    fo.restarts = opt.restarts;
    fo.seed = numkit::derive_seed(opt.seed, stream * 4 + static_cast<std::uint64_t>(s + 1));
    fo.det_sign = s;
    fo.fixed_c = s == 0 ? c : Matrix(s * c);
    const jmaps::FitResult r = jmaps::fit_conjugation(src.images, dst.images, fo);
    if (r.residual < best.residual) best = r;
  }
  return best;
}

}  // namespace

SearchResult search_equation(const MapFamily& f, const MapFamily& fp, Equation eq, const SearchOptions& opt) {
  if (f.is_complex() || fp.is_complex()) throw Error("search_equation: real algebras only");
  if (f.r() != 2 || fp.r() != 2) throw Error("search_equation: the Psi candidate sets assume r = 2");
  SearchResult res;
  res.equation = eq;
  res.min_residual = std::numeric_limits<double>::infinity();
  const auto psis = psi_candidates(eq);
  for (std::size_t i = 0; i < psis.size(); ++i) {
    const Matrix& psi = psis[i];
    PsiResult pr;
    pr.psi = psi;
    pr.witness.psi = psi;
    const bool signed_c = eq != Equation::Eq2So;
    const Matrix c = eq == Equation::Eq4 ? psi : Matrix(psi.transpose());
    const auto first = fit_one(f, fp, c, signed_c, opt, 2 * i);
    pr.witness.a = first.a;
    if (eq == Equation::Eq4) {
      pr.residual = first.residual;
    } else {
      const auto second = fit_one(fp, f, c, signed_c, opt, 2 * i + 1);
      pr.witness.ap = second.a;
      pr.residual = std::sqrt(first.residual * first.residual + second.residual * second.residual);
    }
    if (pr.residual < res.min_residual) {
      res.min_residual = pr.residual;
      res.best = pr.witness;
    }
    res.per_psi.push_back(std::move(pr));
  }
  return res;
}

RigidityCertificate one_parameter_rigidity(const MapFamily& f, const MapFamily& fp, double tol) {
  if (f.is_complex() || fp.is_complex()) throw Error("one_parameter_rigidity: real algebras only");
  RigidityCertificate c;
  c.dim_first = liealg::centralizer_dim(fp.images, tol);
  c.dim_second = liealg::centralizer_dim(f.images, tol);
  c.dimension = c.dim_first + c.dim_second;
  return c;
}

ConditionReport curvature_condition_report(const geometry::AdmissibleForm& lam, const SearchOptions& opt) {
  if (lam.is_zero()) throw Error("curvature_condition_report: zero form");
  ConditionReport rep;
  rep.form_kind = geometry::form_kind_name(lam.kind());
  rep.threshold = opt.threshold;
  Equation eq = Equation::Eq2Sym;
  if (lam.kind() == geometry::FormKind::Linear) eq = Equation::Eq2So;
  if (lam.kind() == geometry::FormKind::Hopf) eq = Equation::Eq4;
  rep.search = search_equation(lam.first(), lam.second(), eq, opt);
  rep.rigidity = one_parameter_rigidity(lam.first(), lam.second());
  const bool n_ok = rep.search.min_residual >= opt.threshold;
  rep.verdict = n_ok && rep.rigidity.certified() ? "evidence-nonisometric" : "inconclusive";
  return rep;
}

nlohmann::json to_json(const ConditionReport& r) {
  nlohmann::json j;
  j["form_kind"] = r.form_kind;
  j["equation"] = equation_name(r.search.equation);
  j["threshold"] = r.threshold;
  j["min_residual"] = r.search.min_residual;
  nlohmann::json per = nlohmann::json::array();
  for (const PsiResult& p : r.search.per_psi)
    per.push_back({{"psi", {{p.psi(0, 0), p.psi(0, 1)}, {p.psi(1, 0), p.psi(1, 1)}}}, {"residual", p.residual}});
  j["psi_candidates"] = per;
  j["rigidity_dimension"] = r.rigidity.dimension;
  j["verdict"] = r.verdict;
  return j;
}

}  // namespace isospec::nonisometry

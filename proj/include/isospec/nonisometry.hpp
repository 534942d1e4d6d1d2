#pragma once

// Algebraic necessary conditions for an isometry between g_lambda and
// g_lambda': residuals of the curvature-form equations, searches over the
// admissible automorphisms Psi of z, and the infinitesimal rigidity rank.
// Everything here is evidence, never a proof of nonisometry.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "isospec/geometry.hpp"
#include "isospec/jmaps.hpp"

namespace isospec::nonisometry {

/// eq2-so:  j'(Psi^T Z) = A j(Z) A^-1 and j(Psi^T Z) = A' j'(Z) A'^-1.
/// eq2-sym: c'(det A Psi^T Z) = A c(Z) A^-1 and c(det A' Psi^T Z) = A' c'(Z) A'^-1.
/// eq4:     c'(det A Psi Z) = A c(Z) A^-1.
enum class Equation { Eq2So, Eq2Sym, Eq4 };
const char* equation_name(Equation e);

struct Candidate {
  Matrix a;
  Matrix ap;   // unused by eq4
  Matrix psi;  // r x r
};

/// sqrt of the summed squared Frobenius residuals over the Z basis.
double equation_residual(const jmaps::MapFamily& f, const jmaps::MapFamily& fp, Equation eq, const Candidate& c);

/// The 8 signed permutations of R^2 (eq2) or the 4 sign patterns diag(+-1, +-1) (eq4).
std::vector<Matrix> psi_candidates(Equation eq);

struct PsiResult {
  Matrix psi;
  double residual = 0.0;
  Candidate witness;
};

struct SearchOptions {
  int restarts = 40;
  std::uint64_t seed = 1;
  double threshold = 1e-3;
};

struct SearchResult {
  Equation equation = Equation::Eq2Sym;
  std::vector<PsiResult> per_psi;
  double min_residual = 0.0;
  Candidate best;
};

SearchResult search_equation(const jmaps::MapFamily& f, const jmaps::MapFamily& fp, Equation eq,
                             const SearchOptions& opt);

struct RigidityCertificate {
  int dimension = 0;   // dim of {(X, X') : [X, f'(Z_i)] = 0, [X', f(Z_i)] = 0}
  int dim_first = 0;   // centralizer of f'
  int dim_second = 0;  // centralizer of f
  bool certified() const { return dimension == 0; }
};

RigidityCertificate one_parameter_rigidity(const jmaps::MapFamily& f, const jmaps::MapFamily& fp,
                                           double tol = 1e-10);

struct ConditionReport {
  std::string form_kind;
  SearchResult search;
  RigidityCertificate rigidity;
  double threshold = 0.0;
  std::string verdict;  // "evidence-nonisometric" or "inconclusive"
};

/// Equation system chosen by form kind: linear -> eq2-so, cross -> eq2-sym, hopf -> eq4.
ConditionReport curvature_condition_report(const geometry::AdmissibleForm& lam, const SearchOptions& opt);

nlohmann::json to_json(const ConditionReport& r);

}  // namespace isospec::nonisometry

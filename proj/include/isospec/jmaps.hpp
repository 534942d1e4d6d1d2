#pragma once

// Linear maps z = R^r -> g (so(m), su(m) or Sym0(R^3)) given by the images of
// an orthonormal basis Z_1..Z_r: isospectrality checks, the block swap
// construction, genericity, equivalence search and a numerical partner finder.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "isospec/liealg.hpp"

namespace isospec::jmaps {

using liealg::Algebra;

struct MapFamily {
  Algebra algebra = Algebra::SO;
  int m = 0;
  std::vector<Matrix> images;    // real algebras (so, sym0)
  std::vector<CMatrix> cimages;  // su

  int r() const { return static_cast<int>(is_complex() ? cimages.size() : images.size()); }
  bool is_complex() const { return algebra == Algebra::SU; }
  /// f(z) = sum_k z_k f(Z_k).
  Matrix at(const Vector& z) const;
  CMatrix cat(const Vector& z) const;
  /// Throws unless every image lies in the declared algebra.
  void validate(double tol = 1e-12) const;
};

MapFamily make_real_family(Algebra a, std::vector<Matrix> images);
MapFamily make_su_family(std::vector<CMatrix> images);

struct PaperCData {
  MapFamily c, cp;
  Matrix e, ep;  // as printed
};

/// The explicit Sym0(R^3) pair and the involutions E, E'.
PaperCData paper_cmaps();

/// Adds `eps` to entry (0,2) and (2,0) of c'(Z_2) (a symmetric perturbation).
MapFamily perturb_second_image(const MapFamily& f, double eps);

struct IsospectralCertificate {
  bool pass = false;
  double grid_residual = 0.0;        // max invariant distance over the grid
  double polynomial_residual = 0.0;  // max coefficient distance of fitted polynomials
  int grid_points = 0;
  bool inconclusive = false;         // degenerate even so(m) data met on the grid
  /// coefficient_polys[k][i]: coefficient of a^i b^(k-i) in the t^(m-k)
  /// coefficient of det(tI - f(aZ_1 + bZ_2)) (real parts; r = 2 only).
  std::vector<std::vector<double>> coefficient_polys;
  std::vector<std::vector<double>> coefficient_polys_prime;
};

/// Compares orbit invariants of f(Z), f'(Z) over a deterministic grid on the unit
/// circle (r = 2) or a fixed pseudo-random set of unit vectors (r != 2), and for
/// r = 2 the interpolated coefficient polynomials.
IsospectralCertificate check_isospectral(const MapFamily& f, const MapFamily& fp, int grid_points = 720,
                                         double tol = 1e-10);

/// Char-poly coefficients of f(aZ_1 + bZ_2) as homogeneous polynomials in (a, b).
std::vector<std::vector<Complex>> coefficient_polynomials(const MapFamily& f);

/// j(Z) = diag(j1(Z), j2(Z)), j'(Z) = diag(j2(Z), j1(Z)) in so(2m) / su(2m).
std::pair<MapFamily, MapFamily> swap_pair(const MapFamily& j1, const MapFamily& j2);

enum class GenericityMode { Centralizer, Kernel };

struct GenericityResult {
  int dimension = 0;
  bool pass = false;
};

/// Centralizer mode: for so/su families, the centralizer in so(m)/su(m); for
/// sym0, the centralizer in so(3). Kernel mode: kernel of Z -> f(Z).
GenericityResult check_genericity(const MapFamily& f, GenericityMode mode, double tol = 1e-10);

/// Centralizer in so(m1) + so(m1) (or su) of the block-diagonal images of a
/// swap-pair family whose blocks have size m1.
int block_centralizer_dim(const MapFamily& f, int block, double tol = 1e-10);

struct FitOptions {
  int restarts = 20;
  std::uint64_t seed = 1;
  int max_iterations = 200;
  /// +1 / -1 restricts det(A); 0 samples both components.
  int det_sign = 0;
  /// When set, C is held fixed at this matrix instead of optimized over O(2).
  std::optional<Matrix> fixed_c;
};

struct FitResult {
  double residual = 0.0;  // sqrt(sum_k ||sum_l C_lk dst_l - A src_k A^T||_F^2)
  Matrix a;
  Matrix c;
  int best_restart = -1;
  std::vector<double> restart_residuals;
};

/// Minimizes over A in O(m) (and C in O(r) unless fixed) by Levenberg-Marquardt
/// on the Cayley chart, restarting from Haar-random points. Deterministic
/// min-reduction keyed on (residual, restart index).
FitResult fit_conjugation(const std::vector<Matrix>& src, const std::vector<Matrix>& dst, const FitOptions& opt);

struct EquivalenceResult {
  double min_residual = 0.0;
  Matrix e;
  Matrix c;
  bool equivalent = false;           // residual <= 1e-8
  bool inequivalence_evidence = false;  // residual >= threshold
  double threshold = 0.0;
  int restarts = 0;
};

/// Searches for (E, C) in O(m) x O(r) with f'(CZ) = E f(Z) E^-1. Real algebras only.
EquivalenceResult equivalence_search(const MapFamily& f, const MapFamily& fp, int restarts, std::uint64_t seed,
                                     double threshold);

struct PartnerOptions {
  std::uint64_t seed = 1;
  int max_attempts = 8;
  double step = 0.3;
  int angles = 12;
  double constraint_tol = 1e-10;
  int equivalence_restarts = 24;
  double equivalence_threshold = 1e-3;
};

struct PartnerResult {
  bool success = false;
  MapFamily partner;
  double constraint_residual = 0.0;
  double equivalence_residual = 0.0;
  int attempts = 0;
  std::string message;
};

/// Gauss-Newton on the char-poly constraint system from a random step off the
/// equivalence orbit. so(m), m >= 5, r = 2.
PartnerResult find_isospectral_partner(const MapFamily& j, const PartnerOptions& opt);

/// Random so(m) family with images of unit Frobenius norm.
MapFamily random_so_family(int m, int r, std::uint64_t seed);
MapFamily random_su_family(int m, int r, std::uint64_t seed);
/// f'(Z) = S f(Z) S^-1 for every image.
MapFamily conjugate_family(const MapFamily& f, const Matrix& s);
MapFamily conjugate_family(const MapFamily& f, const CMatrix& s);

nlohmann::json to_json(const MapFamily& f);
MapFamily family_from_json(const nlohmann::json& j);
/// "paper-4.6" (returns c; "paper-4.6-prime" returns c') or a JSON file path.
MapFamily load_family(const std::string& ref);

}  // namespace isospec::jmaps

#pragma once

// Compact groups SO(2m+2r) and SU(2m+r+1) with the block subgroups H = K x K
// (top left), P (bottom right) and its maximal torus T; left invariant metrics
// g_lambda built from j = (j1, j2) : z -> h; Laplacian blocks on the defining
// and adjoint representations; the determinant potential and its symmetries.

#include <cstdint>
#include <string>
#include <vector>

#include "isospec/jmaps.hpp"
#include "isospec/numkit.hpp"

namespace isospec::liegroup {

enum class GroupFamily { SO, SU };
const char* group_family_name(GroupFamily f);

struct GroupModel {
  GroupFamily family = GroupFamily::SO;
  int m = 5;
  int r = 2;

  int size() const;  // 2m+2r or 2m+r+1
  int algebra_dim() const;
  /// g0-orthonormal basis of the Lie algebra (real matrices stored as complex for SO).
  std::vector<CMatrix> algebra_basis() const;
  /// g0-orthonormal basis Z_1..Z_r of z = Lie(T).
  std::vector<CMatrix> z_basis() const;
  /// Embeds (X, Y) in k + k into the top left blocks.
  CMatrix embed_h(const CMatrix& x, const CMatrix& y) const;
  /// g0(X, Y) = -1/2 tr(XY) (SO) or -Re tr(XY) (SU).
  double g0(const CMatrix& x, const CMatrix& y) const;
  /// Coordinates of X in algebra_basis().
  Vector coordinates(const CMatrix& x) const;
  /// Permutation matrix exchanging the first two m-blocks.
  CMatrix tau() const;
  std::string describe() const;
};

/// j(Z_k) = diag(j1(Z_k), j2(Z_k), 0) in h.
std::vector<CMatrix> j_images(const GroupModel& g, const jmaps::MapFamily& j1, const jmaps::MapFamily& j2);

struct LeftInvariantMetric {
  GroupModel group;
  std::vector<CMatrix> j;  // j(Z_k) in h
  Matrix lambda;           // Lambda = sum_k z_k j_k^T in basis coordinates
  Matrix gram;             // (I + Lambda)^T (I + Lambda)
};

LeftInvariantMetric make_metric(const GroupModel& g, const jmaps::MapFamily& j1, const jmaps::MapFamily& j2);

/// X_i = (I - Lambda) E_i, a g_lambda-orthonormal frame.
std::vector<CMatrix> metric_frame(const LeftInvariantMetric& lm);
/// max |Gram of the frame under g_lambda - I|.
double frame_gram_residual(const LeftInvariantMetric& lm);

enum class Representation { Defining, Adjoint };
const char* representation_name(Representation r);

/// Matrix of -sum_i pi(X_i)^2 for a given frame (Hermitian; real for SO and ad).
CMatrix block_operator(const GroupModel& g, const std::vector<CMatrix>& frame, Representation rep);
/// Ascending spectrum of block_operator for the metric frame.
std::vector<double> block_laplacian_spectrum(const LeftInvariantMetric& lm, Representation rep);

/// d(A, V) = det(V, AV, ..., A^{m-1} V); for a matrix V the product over columns.
Complex vandermonde_d(const CMatrix& a, const CMatrix& v);

struct GroupPotential {
  GroupFamily family = GroupFamily::SO;
  int m = 5;
  double c1 = 2.0;
  double c2 = 1.0;
};

/// exp(c1 det A + c2 det E) (SO) or the SU variant with the d(A, C), d(E, F) terms.
double group_potential(const CMatrix& x, const GroupPotential& pot, double tol = 1e-10);

CMatrix random_group_element(const GroupModel& g, Rng& rng);

struct InvarianceReport {
  double max_deviation = 0.0;
  int samples = 0;
};

/// phi(q x q') vs phi(x), q, q' in Q = H x P.
InvarianceReport check_qlqr_invariance(const GroupModel& g, const GroupPotential& pot, int samples,
                                       std::uint64_t seed);
/// SO: Q_L x Q_R. SU: Inn(H) x P_L x T_R.
InvarianceReport check_symmetry_group_invariance(const GroupModel& g, const GroupPotential& pot, int samples,
                                                 std::uint64_t seed);
/// phi(h x h^-1) vs phi(x), h in H.
InvarianceReport check_h_conjugation_invariance(const GroupModel& g, const GroupPotential& pot, int samples,
                                                std::uint64_t seed);
/// max |phi(tau x tau^-1) - phi(x)|.
InvarianceReport tau_deviation(const GroupModel& g, const GroupPotential& pot, int samples, std::uint64_t seed);

struct HypothesisCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct HypothesisCertificate {
  std::vector<HypothesisCheck> checks;
  bool pass() const;
};

/// [z,h] = 0, z perp h, tau isometric and fixing T, tau_* swapping the k-factors,
/// H-conjugation invariance of phi, and tau^* lambda^j = lambda^{j'}.
HypothesisCertificate check_group_hypotheses(const GroupModel& g, const jmaps::MapFamily& j1,
                                             const jmaps::MapFamily& j2, const GroupPotential& pot,
                                             int samples = 200, std::uint64_t seed = 1);

}  // namespace isospec::liegroup

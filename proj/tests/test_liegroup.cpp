#include <cmath>

#include "doctest.h"
#include "isospec/galerkin.hpp"
#include "isospec/liegroup.hpp"

using namespace isospec;
using namespace isospec::liegroup;

namespace {

const GroupModel kSO14{GroupFamily::SO, 5, 2};
const GroupModel kSU9{GroupFamily::SU, 3, 2};

jmaps::MapFamily zero_so(int m, int r) {
  return jmaps::make_real_family(liealg::Algebra::SO, std::vector<Matrix>(r, Matrix::Zero(m, m)));
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  return galerkin::compare_spectra(a, b, 1.0).max_relative_gap;
}

}  // namespace

TEST_CASE("vandermonde determinant") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  CMatrix v(2, 1);
  v << 1, 1;
  CHECK(std::abs(vandermonde_d(a, v) - Complex(1, 0)) <= 1e-15);
  Rng rng(1);
  const Matrix g = numkit::gaussian_matrix(3, 1, rng);
  CHECK(std::abs(vandermonde_d(CMatrix::Identity(3, 3), g.cast<Complex>())) == 0.0);
  // SL invariance: d(B A B^-1, B v) = d(A, v).
  const CMatrix a3 = numkit::gaussian_matrix(3, 3, rng).cast<Complex>();
  const CMatrix v3 = numkit::gaussian_matrix(3, 1, rng).cast<Complex>();
  CMatrix b = numkit::gaussian_matrix(3, 3, rng).cast<Complex>();
  b /= std::pow(b.determinant(), 1.0 / 3.0);
  const Complex lhs = vandermonde_d(b * a3 * b.inverse(), b * v3), rhs = vandermonde_d(a3, v3);
  CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
}

TEST_CASE("potential at the identity is exp(c1 + c2)") {
  for (const GroupModel& g : {kSO14, kSU9}) {
    const GroupPotential pot{g.family, g.m, 2.0, 1.0};
    CHECK(group_potential(CMatrix::Identity(g.size(), g.size()), pot) == doctest::Approx(std::exp(3.0)));
  }
}

TEST_CASE("bi-invariant defining block of SO(6) is the Casimir 5") {
  const GroupModel g{GroupFamily::SO, 2, 1};
  REQUIRE(g.size() == 6);
  const auto basis = g.algebra_basis();
  const CMatrix op = block_operator(g, basis, Representation::Defining);
  CHECK((op - 5.0 * CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
  // Hand value from the matrix units: sum_{a<b} E_ab^2 = -(n-1) I.
  CMatrix acc = CMatrix::Zero(6, 6);
  for (const Matrix& e : liealg::so_basis(6)) acc -= (e * e).cast<Complex>();
  CHECK((acc - 5.0 * CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bi-invariant operators commute with the representation") {
  for (const GroupModel& g : {GroupModel{GroupFamily::SO, 2, 1}, GroupModel{GroupFamily::SU, 1, 1}}) {
    const auto basis = g.algebra_basis();
    const CMatrix def = block_operator(g, basis, Representation::Defining);
    const CMatrix ad = block_operator(g, basis, Representation::Adjoint);
    for (const CMatrix& x : basis) {
      CHECK((def * x - x * def).cwiseAbs().maxCoeff() <= 1e-10);
      CMatrix adx(basis.size(), basis.size());
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const CMatrix br = x * basis[b] - basis[b] * x;
        for (std::size_t a = 0; a < basis.size(); ++a) adx(a, b) = g.g0(basis[a], br);
      }
      CHECK((ad * adx - adx * ad).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("metric frames") {
  const auto zero = zero_so(5, 2);
  const auto lm0 = make_metric(kSO14, zero, zero);
  const auto frame0 = metric_frame(lm0);
  const auto basis = kSO14.algebra_basis();
  for (std::size_t i = 0; i < basis.size(); ++i) CHECK((frame0[i] - basis[i]).cwiseAbs().maxCoeff() == 0.0);

  const auto j1 = jmaps::random_so_family(5, 2, 1), j2 = jmaps::random_so_family(5, 2, 2);
  const auto lm = make_metric(kSO14, j1, j2);
  CHECK(frame_gram_residual(lm) <= 1e-12);
  // lambda^j vanishes on z.
  for (const CMatrix& z : kSO14.z_basis()) CHECK((lm.lambda * kSO14.coordinates(z)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((lm.lambda * lm.lambda).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("structural hypotheses on SO(14) and SU(9)") {
  const auto j1 = jmaps::random_so_family(5, 2, 1), j2 = jmaps::random_so_family(5, 2, 2);
  const auto cert = check_group_hypotheses(kSO14, j1, j2, {GroupFamily::SO, 5, 2, 1});
  for (const auto& c : cert.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(cert.pass());
  const auto s1 = jmaps::random_su_family(3, 2, 1);
  Rng rng(2);
  const auto s2 = jmaps::conjugate_family(s1, numkit::haar_special_unitary(3, rng));
  CHECK(check_group_hypotheses(kSU9, s1, s2, {GroupFamily::SU, 3, 2, 1}).pass());
}

TEST_CASE("tau swaps the two k factors") {
  const CMatrix t = kSO14.tau();
  Rng rng(3);
  const CMatrix x = numkit::gaussian_matrix(5, 5, rng).cast<Complex>();
  const CMatrix y = numkit::gaussian_matrix(5, 5, rng).cast<Complex>();
  const CMatrix xs = x - x.transpose(), ys = y - y.transpose();
  CHECK((t * kSO14.embed_h(xs, ys) * t.inverse() - kSO14.embed_h(ys, xs)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("swap pair block spectra agree; the defining block sees only image norms") {
  const auto j1 = jmaps::random_so_family(5, 2, 11);
  jmaps::PartnerOptions po;
  po.seed = 5;
  const auto pr = jmaps::find_isospectral_partner(j1, po);
  REQUIRE(pr.success);
  const auto& j2 = pr.partner;
  const auto zero = zero_so(5, 2);
  for (Representation rep : {Representation::Defining, Representation::Adjoint}) {
    INFO(representation_name(rep));
    const auto a = block_laplacian_spectrum(make_metric(kSO14, j1, j2), rep);
    const auto b = block_laplacian_spectrum(make_metric(kSO14, j2, j1), rep);
    CHECK(max_gap(a, b) <= 1e-10);
    const auto c = block_laplacian_spectrum(make_metric(kSO14, j1, zero), rep);
    const auto d = block_laplacian_spectrum(make_metric(kSO14, j2, zero), rep);
    CHECK(max_gap(c, d) <= 1e-10);
    // Conjugated data (left-invariance surrogate).
    const Matrix s = numkit::haar_special_orthogonal(5, std::uint64_t{9});
    const auto e = block_laplacian_spectrum(make_metric(kSO14, jmaps::conjugate_family(j1, s), zero), rep);
    CHECK(max_gap(c, e) <= 1e-10);
  }
  // A non-isospectral family with unit-norm images is invisible to the
  // defining block but separated by the adjoint block.
  const auto jr = jmaps::random_so_family(5, 2, 4);
  const auto c = make_metric(kSO14, j1, zero), r = make_metric(kSO14, jr, zero);
  CHECK(max_gap(block_laplacian_spectrum(c, Representation::Defining),
                block_laplacian_spectrum(r, Representation::Defining)) <= 1e-10);
  CHECK(max_gap(block_laplacian_spectrum(c, Representation::Adjoint),
                block_laplacian_spectrum(r, Representation::Adjoint)) >= 1e-3);
}

TEST_CASE("SO potential: Q_L x Q_R invariance and tau non-invariance") {
  const GroupPotential pot{GroupFamily::SO, 5, 2.0, 1.0};
  CHECK(check_qlqr_invariance(kSO14, pot, 1000, 1).max_deviation <= 1e-12);
  CHECK(tau_deviation(kSO14, pot, 1000, 2).max_deviation >= 0.1);
  // c1 = c2 restores the tau symmetry.
  CHECK(tau_deviation(kSO14, {GroupFamily::SO, 5, 1.0, 1.0}, 200, 3).max_deviation <= 1e-12);
}

TEST_CASE("SU potential symmetries") {
  const GroupPotential pot{GroupFamily::SU, 3, 2.0, 1.0};
  CHECK(check_symmetry_group_invariance(kSU9, pot, 500, 1).max_deviation <= 1e-12);
  CHECK(check_h_conjugation_invariance(kSU9, pot, 500, 2).max_deviation <= 1e-12);
  CHECK(tau_deviation(kSU9, pot, 500, 3).max_deviation >= 0.1);
}

TEST_CASE("group elements are validated") {
  const GroupPotential pot{GroupFamily::SO, 5, 2.0, 1.0};
  CHECK_THROWS_AS(group_potential(2.0 * CMatrix::Identity(14, 14), pot), Error);
  Rng rng(4);
  const CMatrix x = random_group_element(kSO14, rng);
  CHECK((x.adjoint() * x - CMatrix::Identity(14, 14)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(x.determinant() - Complex(1, 0)) <= 1e-10);
}

TEST_CASE("SU potential is not invariant under left translation by H or right translation by P") {
  // x mixes the A block (c times a cyclic shift S) with the C block (s S), so
  // each column gives det = (c s)^3 and d(A, C) = (c s)^9 ~ 1.35e-3.
  const double c = 0.6, s = 0.8;
  CMatrix shift = CMatrix::Zero(3, 3);
  shift(1, 0) = shift(2, 1) = shift(0, 2) = 1.0;
  CMatrix x = CMatrix::Identity(9, 9);
  x.block(0, 0, 3, 3) = c * shift;
  x.block(0, 6, 3, 3) = s * shift;
  x.block(6, 0, 3, 3) = -s * CMatrix::Identity(3, 3);
  x.block(6, 6, 3, 3) = c * CMatrix::Identity(3, 3);
  const GroupPotential pot{GroupFamily::SU, 3, 2.0, 1.0};
  const Complex d0 = vandermonde_d(x.block(0, 0, 3, 3), x.block(0, 6, 3, 3));
  CHECK(std::abs(d0 - std::pow(c * s, 9)) <= 1e-15);
  Rng rng(3);
  CMatrix h = CMatrix::Identity(9, 9), p = CMatrix::Identity(9, 9);
  h.block(0, 0, 3, 3) = numkit::haar_special_unitary(3, rng);
  p.block(6, 6, 3, 3) = numkit::haar_special_unitary(3, rng);
  const double phi = group_potential(x, pot);
  // phi changes by phi (Re d0^2 - Re d^2), about 1e-6: small but far above rounding.
  CHECK(std::abs(group_potential(h * x, pot) - phi) >= 1e-7);
  CHECK(std::abs(group_potential(x * p, pot) - phi) >= 1e-7);
  CHECK(std::abs(group_potential(h * x * h.adjoint(), pot) - phi) <= 1e-12);
}

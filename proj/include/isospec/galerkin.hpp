#pragma once

// Rayleigh-Ritz pencils on polynomial trial spaces over S^{N-1} and B^N:
// stiffness of the metric g_lambda (optionally conformally rescaled), mass and
// potential matrices, assembled from exact moments or by seeded quadrature.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "isospec/geometry.hpp"
#include "isospec/moments.hpp"
#include "isospec/numkit.hpp"
#include "isospec/poly.hpp"

namespace isospec::galerkin {

enum class Boundary { Sphere, BallNeumann, BallDirichlet };
const char* boundary_name(Boundary b);

struct PolyBasis {
  int n = 0;       // ambient dimension N
  int degree = 0;
  Boundary boundary = Boundary::Sphere;
  std::vector<Monomial> indices;
  std::vector<Polynomial> functions;

  /// Sphere: |alpha| <= d with alpha_N <= 1. Neumann: |alpha| <= d.
  /// Dirichlet: (1 - |x|^2) x^alpha with |alpha| <= d - 2.
  static PolyBasis make(int n, int d, Boundary bc);
  std::size_t size() const { return functions.size(); }
  Domain domain() const { return boundary == Boundary::Sphere ? Domain::Sphere : Domain::Ball; }
  bool same_space(const PolyBasis& o) const { return n == o.n && degree == o.degree && boundary == o.boundary; }
};

enum class AssemblyMode { Exact, Quadrature };
const char* mode_name(AssemblyMode m);

struct AssemblyOptions {
  AssemblyMode mode = AssemblyMode::Exact;
  /// Schrodinger potential (P matrix); absent -> no P.
  std::optional<geometry::PotentialField> potential;
  /// Conformal factor phi: the metric becomes phi * g_lambda.
  std::optional<geometry::PotentialField> conformal;
  std::uint64_t seed = 1;
  /// Quadrature: nested checkpoints of the same point stream (each even).
  std::vector<std::int64_t> checkpoints{1000000};
};

struct GalerkinPencil {
  numkit::SymmetricMatrix k, m;
  std::optional<numkit::SymmetricMatrix> p;
  AssemblyMode mode = AssemblyMode::Exact;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int degree = 0;
  Boundary boundary = Boundary::Sphere;
  std::string form_id;
  std::string potential_id;
};

/// Exact mode: one pencil. Quadrature mode: one pencil per checkpoint.
std::vector<GalerkinPencil> assemble_all(const PolyBasis& basis, const geometry::AdmissibleForm& form,
                                         const AssemblyOptions& opt);
/// The single exact pencil, or the last quadrature checkpoint.
GalerkinPencil assemble(const PolyBasis& basis, const geometry::AdmissibleForm& form, const AssemblyOptions& opt);

/// Spectrum of (hbar^2 K + P, M).
numkit::PencilSpectrum pencil_spectrum(const GalerkinPencil& p, double hbar = 1.0);

struct SpectrumComparison {
  bool pass = false;
  double max_relative_gap = 0.0;
  double rel_tol = 0.0;
  std::vector<double> a, b;
};

/// Relative gap |a_i - b_i| / max(|a_i|, |b_i|, 1e-6 max|a|).
SpectrumComparison compare_spectra(const std::vector<double>& a, const std::vector<double>& b, double rel_tol);
/// Checks that both pencils live on the same trial space and mode first.
SpectrumComparison compare_pencils(const GalerkinPencil& a, const GalerkinPencil& b, double hbar, double rel_tol);

/// Integral means of phi_1, phi_2, phi_1^2, phi_2^2 under the domain measure, exact.
struct HeatInvariants {
  Rational mean1, mean2, square_mean1, square_mean2;
  bool pass() const { return mean1 == mean2 && square_mean1 == square_mean2; }
};
HeatInvariants heat_invariants(const geometry::AmbientSpace& amb, const geometry::PotentialField& phi1,
                               const geometry::PotentialField& phi2);

/// Ascending eigenvalues, one per line, 17 significant digits.
std::string spectrum_csv(const std::vector<double>& values);
nlohmann::json certificate_json(const std::string& experiment, const GalerkinPencil& p,
                                const SpectrumComparison& c);

}  // namespace isospec::galerkin

#pragma once

// Wall-crossing layer: self-dual class representatives over [0,1]^n, the
// pairing map Psi, exact PL mapping degrees on ([0,1]^n, boundary), the
// bound ledger for almost-localized forms, and the mod-2 composition sums.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "famclass/lattice.hpp"

namespace famclass::wall {

using lattice::Int;
using lattice::IntMatrix;
using lattice::Lattice;
using lattice::LatticeVector;
using lattice::Rational;
using RVec = std::vector<Rational>;

struct WallFamily {
  int n = 1;
  Lattice lattice{IntMatrix::identity(1)};
  std::vector<LatticeVector> gammas;
  /// t in [0,1]^n -> class in lattice coordinates. Must be exact.
  std::function<RVec(const RVec& t)> sigma;
  std::string description;
};

/// Psi_i(t) = sigma(t)^T G gamma_i.
RVec psi(const WallFamily& fam, const RVec& t);

/// Wraps a floating-point evaluator; each double is converted exactly.
std::function<RVec(const RVec&)> exact_sigma(std::function<std::vector<double>(const std::vector<double>&)> f);

/// Coordinatewise min(2 t_i, 1): collapse [1/2, 1] to 1/2, then rescale [0, 1/2] onto [0, 1].
RVec f_rs(const RVec& t);

struct DegreeOptions {
  int initial_subdivision = 2;
  int max_subdivision = 64;
  int min_levels = 2;  // consecutive agreeing levels required
  int max_ray_draws = 16;
};

struct DegreeLevel {
  int subdivision = 0;
  Int degree = 0;
  std::size_t simplices = 0;
};

struct DegreeResult {
  Int degree = 0;
  std::vector<DegreeLevel> trace;
  std::uint64_t seed = 0;
  int ray_draws = 0;  // total rays drawn over all levels
};

/// Degree of Psi o sigma : ([0,1]^n, boundary) -> (R^n, R^n \ 0) by counting
/// oriented boundary simplices whose image cone contains a seeded rational ray.
DegreeResult boundary_degree(const WallFamily& fam, std::uint64_t seed = 1, const DegreeOptions& opts = {});

/// Constants of the almost-localized-form estimates plus neck lengths.
struct BoundLedger {
  std::map<std::string, double> constants;  // "C1" .. "C18"
  double T = 0.0;
  std::vector<double> Ti;
  std::vector<Rational> baselines;  // pairing of mu_i^0 with gamma_i

  double constant(const std::string& name) const;
  double min_T() const;
};

/// 4T >= 3(T_i + T_j) for i != j, T >= T_i, T_i > C1.
void check_ledger(const BoundLedger& ledger);

enum class Face { Zero, One };
std::string to_string(Face f);

struct FaceCertificate {
  int axis = 0;
  Face face = Face::Zero;
  double center = 0.0;  // baseline on F_i^0, its negative on F_i^1
  double radius = 0.0;  // C17 / min T or C18 / min T
  double lo = 0.0, hi = 0.0;
  bool certified = false;     // interval excludes 0
  double required_min_T = 0;  // smallest min T that certifies this face
};

FaceCertificate ledger_certificate(const BoundLedger& ledger, Face face, int axis);

struct LedgerConclusion {
  std::vector<FaceCertificate> faces;
  bool opposite_signs = false;  // every axis certified on both faces with opposite signs
  double required_min_T = 0.0;
  std::string statement;
};

LedgerConclusion face_sign_conclusion(const BoundLedger& ledger);

/// Builds sigma on nH with gamma_i = (1,1) on the i-th summand. `f_star` holds
/// one 2x2 block per summand, each an isometry of H with f* gamma = -gamma.
/// Without a ledger the exact-limit classes are used; with one, sigma carries a
/// bounded error of size below C/min T and the ledger must certify every face.
WallFamily reflection_family(int n, const std::vector<IntMatrix>& f_star,
                             const std::optional<BoundLedger>& ledger = std::nullopt);

/// The standard reflection diag(-1,-1) on H.
IntMatrix h_reflection();

/// Concatenated family on [0,1]^(n_a + n_b) over the direct sum lattice.
WallFamily product_family(const WallFamily& a, const WallFamily& b);

/// Lucas: C(n,k) is odd iff k & ~n == 0.
bool binom_odd(Int n, Int k);

struct CompositionTable {
  int n = 1;
  std::map<int, Int> values;  // k = number of factors taken with j = 0
};

struct CompositionResult {
  Int value = 0;                  // in F2
  std::vector<int> contributing;  // k with odd binomial
};

CompositionResult composition_sum(const CompositionTable& table);

bool is_power_of_two(Int n);

struct GluingCount {
  Int value = 0;  // F2
  bool theorem_dependent = true;
};

GluingCount gluing_count(Int wall_degree, Int base_sw);

}  // namespace famclass::wall

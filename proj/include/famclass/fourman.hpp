#pragma once

// Closed oriented 4-manifolds described by (b1, intersection lattice), with the
// auxiliary Spin^c / SO(3) data entering the formal-dimension formulas.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "famclass/lattice.hpp"
#include "famclass/ring.hpp"

namespace famclass::fourman {

using lattice::Int;
using lattice::Lattice;
using lattice::LatticeMap;
using lattice::LatticeVector;

struct FourManifold {
  std::string name;
  int b1 = 0;
  Lattice lattice;
};

struct SpinC {
  LatticeVector c1;
};

/// SO(3)-bundle data: p1 and w2 (a mod-2 vector in the lattice basis).
struct SO3 {
  Int p1 = 0;
  std::vector<int> w2;
};

using AuxClass = std::variant<SpinC, SO3>;

struct MembershipReport {
  bool preserves_class = false;
  bool preserves_homology_orientation = false;
  Ring coefficient_ring = Ring::F2;
};

struct HomeoComparison {
  bool match = false;
  std::vector<std::string> differences;  // empty iff match
};

/// Named standard manifolds.
FourManifold k3();
FourManifold s2xs2();
FourManifold cp2();
FourManifold cp2bar();
/// CP^2 # 2(-CP^2).
FourManifold cp2_2cp2bar();
/// a CP^2 # b (-CP^2).
FourManifold cp2_sum(int a, int b);

int euler_char(const FourManifold& x);

/// (c1^2 - 2 chi - 3 sign) / 4. Throws Hypothesis if c1 is not characteristic.
Int formal_dim_sw(const FourManifold& x, const SpinC& s);

/// -2 p1 - 3 (1 - b1 + b+). Throws Hypothesis if w2 = 0.
Int formal_dim_asd(const FourManifold& x, const SO3& p);

/// Checks p1 == w2^2 (mod 4) using the naive integer lift of w2. Returns a warning
/// message (empty if consistent); with `strict`, inconsistency throws instead.
std::string check_so3_consistency(const FourManifold& x, const SO3& p, bool strict);

struct ConnectedSum {
  FourManifold manifold;
  AuxClass aux;
};

/// Orthogonal sum of lattices, b1 additive, classes concatenated (p1 additive).
ConnectedSum connected_sum(const FourManifold& x1, const FourManifold& x2, const AuxClass& a1, const AuxClass& a2);

/// Connected sum of descriptors only.
FourManifold connected_sum(const FourManifold& x1, const FourManifold& x2);

/// `h1_sign` is the action on the orientation of H^1 (only consulted when b1 > 0).
MembershipReport group_membership(const FourManifold& x, const AuxClass& aux, const LatticeMap& m, int h1_sign = 1);

/// Compares (b1, b+, b-, parity).
HomeoComparison homeo_invariants_match(const FourManifold& x, const FourManifold& y);

/// b+(X) >= n + 2.
bool check_bplus_condition(const FourManifold& x, int n);

}  // namespace famclass::fourman

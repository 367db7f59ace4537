#pragma once

// Finite-dimensional virtual neighborhood counting. A family is a smooth map
// s(b, x) from (base point, fiber point in R^d) to R^m, proper in the sense that
// |s| >= s_min on the fiber box boundary |x|_inf = R. Counts are signed zero
// counts of s + phi at a generic small shift of the perturbation directions.
//
// Orientation convention: a zero of the total map on (fiber box) x (open base
// cell) is counted with the sign of det dF in the coordinate order
// (x_1, ..., x_d, free base coordinates in increasing axis order).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famclass/cochain.hpp"
#include "famclass/ring.hpp"

namespace famclass::vn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using cochain::Int;

enum class BaseKind { Point, Cube, Torus };

std::string to_string(BaseKind k);

/// s(b, x) with b in [0,1]^K (empty for a point) and x in R^d.
using Section = std::function<Vec(const Vec& b, const Vec& x)>;

/// Gluing across the face pair of one torus axis:
/// s(b with b_i = 1, fiber * x) = target * s(b with b_i = 0, x).
struct Transition {
  Mat fiber;
  Mat target;
};

struct ToyFredholmFamily {
  std::string name;
  BaseKind base = BaseKind::Point;
  int base_dim = 0;
  int fiber_dim = 1;
  int target_dim = 1;
  Section section;
  double radius = 1.0;
  std::optional<double> s_min;
  std::vector<Transition> monodromy;  // torus only; empty means identity gluing

  int index() const { return fiber_dim - target_dim; }
  cochain::ComplexPtr complex() const;
  /// det(fiber) * det(target) > 0 for every transition.
  bool orientable() const;
};

/// Checks shapes, transition invertibility, the torus cocycle condition and
/// the gluing relation on samples. Throws on failure.
void validate_family(const ToyFredholmFamily& fam);

/// Sampled min |s| on the fiber box boundary. Throws "properness violated" if it
/// is not positive or falls below a declared s_min.
double properness_margin(const ToyFredholmFamily& fam);

struct Charge {
  std::string cell;
  Vec base_center;   // full base coordinates
  Vec fiber_center;
  double radius = 0.0;
  Mat map;           // m x N_i, orthonormal columns spanning a complement of im ds
};

struct FinDimPerturbation {
  std::vector<Charge> charges;
  int extra_dims = 0;  // unused directions appended by suspension
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  int dimension() const;
};

struct CountOptions {
  int initial_grid = 16;
  std::size_t node_budget = 4'000'000;
  int max_redraws = 8;
  int max_perturbation_dim = 8;
  double transversality_tol = 1e-8;
};

/// Places one charge at each degenerate zero of s on every counted cell.
FinDimPerturbation build_perturbation(const ToyFredholmFamily& fam, std::uint64_t seed, const CountOptions& opts = {});

/// Appends `extra` directions on which the perturbation acts by zero.
FinDimPerturbation suspend(const FinDimPerturbation& phi, int extra);

struct Zero {
  Vec fiber;
  Vec base;  // full base coordinates
  int sign = 0;
};

struct Level {
  int level = 0;
  int grid = 0;  // cells per axis
  Int signed_count = 0;
  int zeros = 0;
};

struct CountResult {
  std::string cell;
  Ring ring = Ring::Z;
  Int value = 0;         // reduced in ring
  Int signed_count = 0;  // before reduction
  std::vector<Level> trace;
  std::vector<Zero> zeros;
  int redraws = 0;
};

/// Index-0 family over a point.
CountResult count_point(const ToyFredholmFamily& fam, const FinDimPerturbation& phi, Ring ring, std::uint64_t seed,
                        const CountOptions& opts = {});

struct FamilyClass {
  cochain::CellCochain cochain;  // degree -index on fam.complex()
  std::vector<CountResult> cells;
};

/// Per-cell counts on all (-index)-cells. Cells listed in `zero_free` must carry
/// no zeros of s (checked) and are assigned 0.
FamilyClass family_class(const ToyFredholmFamily& fam, const FinDimPerturbation& phi, Ring ring, std::uint64_t seed,
                         const std::vector<std::string>& zero_free = {}, const CountOptions& opts = {});

/// Reinterprets a cube family as a torus family glued by `transitions`.
ToyFredholmFamily assemble_twisted_family(ToyFredholmFamily cube_family, std::vector<Transition> transitions);

/// Pullback of a T^1 family along the degree-k self-cover.
ToyFredholmFamily pullback_degree(const ToyFredholmFamily& fam, int k);

struct IndependenceVerdict {
  bool agree = false;
  FamilyClass first;
  FamilyClass second;
};

IndependenceVerdict check_perturbation_independence(const ToyFredholmFamily& fam, const FinDimPerturbation& phi1,
                                                    const FinDimPerturbation& phi2, Ring ring, std::uint64_t seed,
                                                    const CountOptions& opts = {});

struct CobordismVerdict {
  bool agree = false;
  double boundary_margin = 0.0;  // min |s_tau| found on the boundary
  FamilyClass start;
  FamilyClass end;
};

/// Linear homotopy (1 - tau) s0 + tau s1. Throws Hypothesis with a (b, x, tau)
/// witness if it vanishes on the boundary of a counted cell times the fiber box.
CobordismVerdict check_cobordism_invariance(const ToyFredholmFamily& fam0, const ToyFredholmFamily& fam1, Ring ring,
                                            std::uint64_t seed, const CountOptions& opts = {});

}  // namespace famclass::vn

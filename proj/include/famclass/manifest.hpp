#pragma once

// JSON manifest schema: lattices, manifolds with auxiliary classes and diffeos,
// base invariants with provenance, toy families, wall setups, complexes and
// cochains, composition tables, scenarios and requested commands.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "famclass/cochain.hpp"
#include "famclass/fourman.hpp"
#include "famclass/lattice.hpp"
#include "famclass/vnengine.hpp"
#include "famclass/wallcross.hpp"

namespace famclass::manifest {

using json = nlohmann::json;
using lattice::Int;
using lattice::Rational;

/// Integer, "p/q" string, or floating value (converted exactly).
Rational rational_from_json(const json& j);
/// Integer when the denominator is 1, otherwise "p/q".
json rational_to_json(const Rational& q);

/// {"blocks":[{"type":"H"},{"type":"E8","sign":-1},{"type":"diag","entries":[..]},
/// {"type":"custom","gram":[[..]]}]}; each block may carry "copies".
lattice::Lattice lattice_from_json(const json& j);
json lattice_to_json(const lattice::Lattice& l);

lattice::IntMatrix matrix_from_json(const json& j);
json matrix_to_json(const lattice::IntMatrix& m);

/// Named standard manifolds: k3, s2xs2, cp2, cp2bar, cp2#2cp2bar.
fourman::FourManifold builtin_manifold(const std::string& name);
std::vector<std::string> builtin_manifold_names();

/// {"builtin":"k3"}, {"sum":[<manifold>..., each optionally with "copies"]}, or
/// {"name","b1","lattice"}.
fourman::FourManifold manifold_from_json(const json& j);
json manifold_to_json(const fourman::FourManifold& x);

/// Reads "spinc":{"c1"} or "so3":{"p1","w2"} from an entry; nullopt if neither.
std::optional<fourman::AuxClass> aux_from_json(const json& entry, std::size_t rank);
json aux_to_json(const fourman::AuxClass& a);

struct Diffeo {
  std::string name;
  lattice::LatticeMap map;
  int h1_sign = 1;
};

/// {"name","matrix":[[..]] | "identity","h1_sign"} or {"name","block":[[..]],"offset":k}
/// acting by `block` on coordinates [k, k + size) and as the identity elsewhere.
Diffeo diffeo_from_json(const json& j, std::size_t rank);

/// {"builtin":"torus"|"cube","n":k}, {"builtin":"circle","edges":m}, {"builtin":"point"},
/// or raw {"cells":[[ids of dim 0],[ids of dim 1],...],"boundary":[null, M1, M2, ...]}.
cochain::ComplexPtr complex_from_json(const json& j);
json complex_to_json(const cochain::CellComplex& c);

/// {"complex":..,"degree":k,"ring":"Z"|"F2","values":{"id":v}}.
cochain::CellCochain cochain_from_json(const json& j);
json cochain_to_json(const cochain::CellCochain& c);

Ring ring_from_string(const std::string& s);

/// {"builtin":"moebius-1"} or {"name","base":"point|cube|torus","base_dim","fiber_dim",
/// "components":["x0^3 - x0", ...],"radius","s_min","monodromy":[{"fiber","target"}]}.
vn::ToyFredholmFamily family_from_json(const json& j);

/// {"constants":{"C1":..},"T":..,"Ti":[..],"baselines":[..]}.
wall::BoundLedger ledger_from_json(const json& j);
json ledger_to_json(const wall::BoundLedger& l);

struct WallSetup {
  wall::WallFamily family;
  wall::DegreeOptions options;
  std::optional<wall::BoundLedger> ledger;
};

/// {"type":"reflection","n":k,"f_star":[2x2 blocks],"ledger":{..}} or
/// {"type":"custom","lattice":..,"gammas":[..],"sigma":["expr in b0..b(n-1)", ...]};
/// optional "subdivision":{"initial","max","min_levels"}.
WallSetup wall_from_json(const json& j);

/// {"n":k,"values":{"0":v0,...}} or "values":[v0, ..., vn], indexed by k.
wall::CompositionTable composition_from_json(const json& j);
json composition_to_json(const wall::CompositionTable& t);

struct ManifoldEntry {
  fourman::FourManifold manifold;
  std::optional<fourman::AuxClass> aux;
  std::vector<Diffeo> diffeos;
};

struct BaseInvariant {
  Int value = 0;
  std::string provenance;
};

/// A proposed fiberwise splitting X = X_1 # ... # X_k.
struct Decomposition {
  std::string name;
  std::vector<fourman::FourManifold> parts;
};

struct Manifest {
  std::map<std::string, ManifoldEntry> manifolds;
  std::map<std::string, BaseInvariant> base_invariants;
  std::map<std::string, json> families;
  std::map<std::string, json> walls;
  std::map<std::string, json> cochains;
  std::optional<wall::CompositionTable> composition;
  std::vector<json> scenarios;
  std::vector<Decomposition> decompositions;
  std::optional<bool> psc_nonempty;
  std::vector<json> commands;  // each {"run": <command>, ...}

  const ManifoldEntry& manifold(const std::string& name) const;
  const BaseInvariant& invariant(const std::string& name) const;
};

/// Parses and validates: names resolve, base invariants carry provenance, and
/// every family, wall and cochain entry parses.
Manifest parse_manifest(const json& j);
Manifest load_manifest(const std::string& path);

}  // namespace famclass::manifest

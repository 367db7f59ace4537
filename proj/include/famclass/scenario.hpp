#pragma once

// Built-in end-to-end scenarios and the obstruction verdict logic.
//
//   k3-sum(n)       X = K3 # n(S2xS2), c1 = 0, mapping torus of n reflections
//   dissolve(n)     X = K3 # n(CP2 # 2(-CP2)), composed diffeomorphisms
//   composition(n)  the mod-2 composition expansion alone
//   ruberman-asd    one-parameter ASD family on M # CP2 # 2(-CP2)

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "famclass/cochain.hpp"
#include "famclass/fourman.hpp"
#include "famclass/manifest.hpp"

namespace famclass::scenario {

using json = nlohmann::json;
using lattice::Int;

struct Options {
  std::uint64_t seed = 1;
  bool strict = false;
};

/// A theorem or external fact consumed as an axiom.
struct Assumption {
  std::string name;
  std::string statement;
};

struct ObstructionFlag {
  std::string subject;  // decomposition name or "psc"
  std::string verdict;  // "forbidden", "no verdict", "obstructed", "no obstruction"
  std::string detail;
};

struct VerdictReport {
  std::string scenario;
  json params = json::object();
  json computed = json::object();  // dimensions, membership, degrees, counts
  std::optional<cochain::CellCochain> cls;
  Int pairing = 0;
  int degree = 0;                   // cohomological degree n of the class
  bool nonvanishing = false;
  std::optional<bool> generator;    // set when the class lives in H^n(T^n; F2)
  std::string verdict;              // "nonvanishing", "vanishing", "undetermined"
  std::string homeo_triviality;     // statement about the underlying Homeo bundle
  std::optional<fourman::FourManifold> manifold;
  std::vector<Assumption> assumptions;
  std::vector<std::string> notes;
  std::vector<ObstructionFlag> flags;
};

/// Runs a named scenario. Parameters come from `params` (e.g. {"n": 2}); named
/// base invariants are looked up in `m` when given.
VerdictReport run_scenario(const std::string& name, const json& params, const manifest::Manifest* m = nullptr,
                           const Options& opts = {});

std::vector<std::string> scenario_names();

/// Fiberwise-sum and PSC obstructions implied by a verdict. Decompositions must
/// add up to the verdict's manifold; otherwise InvalidInput.
std::vector<ObstructionFlag> obstruction_report(const VerdictReport& v,
                                                const std::vector<manifest::Decomposition>& decompositions,
                                                std::optional<bool> psc_nonempty);

}  // namespace famclass::scenario

#include "famclass/scenario.hpp"

#include <algorithm>

#include "famclass/error.hpp"
#include "famclass/report.hpp"
#include "famclass/wallcross.hpp"

namespace famclass::scenario {

namespace {

using fourman::FourManifold;
using fourman::SO3;
using fourman::SpinC;

struct Input {
  Int value = 0;
  std::string provenance;
};

/// An integer parameter given inline, by base-invariant name, or by default.
Input base_input(const json& params, const char* key, const manifest::Manifest* m, std::optional<Input> fallback) {
  if (params.contains(key)) {
    const json& v = params.at(key);
    if (v.is_number_integer()) return {v.get<Int>(), "supplied as a scenario parameter"};
    if (v.is_string()) {
      require(m != nullptr, ErrorKind::InvalidInput, std::string("parameter ") + key + " names a base invariant but no manifest was given");
      const auto& inv = m->invariant(v.get<std::string>());
      return {inv.value, inv.provenance};
    }
    fail(ErrorKind::InvalidInput, std::string("parameter ") + key + " must be an integer or a base invariant name");
  }
  require(fallback.has_value(), ErrorKind::InvalidInput, std::string("missing input ") + key);
  return *fallback;
}

int param_n(const json& params, int lo, int hi) {
  const json v = params.value("n", json(1));
  require(v.is_number_integer(), ErrorKind::InvalidInput, "n must be an integer");
  const Int n = v.get<Int>();
  require(n >= lo && n <= hi, ErrorKind::InvalidInput,
          "n must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
  return static_cast<int>(n);
}

json manifold_summary(const FourManifold& x) {
  return {{"name", x.name},
          {"b1", x.b1},
          {"rank", x.lattice.rank()},
          {"euler_char", fourman::euler_char(x)},
          {"inertia", report::inertia_to_json(lattice::inertia(x.lattice))},
          {"parity", lattice::to_string(lattice::parity(x.lattice))}};
}

FourManifold repeated_sum(const FourManifold& base, const FourManifold& summand, int n, const std::string& name) {
  FourManifold x = base;
  for (int i = 0; i < n; ++i) x = fourman::connected_sum(x, summand);
  x.name = name;
  return x;
}

void check_hypotheses(const FourManifold& x, int n, Int d) {
  require(fourman::check_bplus_condition(x, n), ErrorKind::Hypothesis,
          "hypothesis b+(X) >= n + 2 fails: b+ = " + std::to_string(lattice::inertia(x.lattice).b_plus) +
              ", n = " + std::to_string(n));
  require(d == -n, ErrorKind::Hypothesis,
          "hypothesis d = -n fails: formal dimension " + std::to_string(d) + ", n = " + std::to_string(n));
}

/// Places `value` on the top cell of T^n and records pairing and generator data.
void torus_class(VerdictReport& v, int n, Int value, Ring ring) {
  auto torus = cochain::build_torus(n);
  const std::string top(static_cast<std::size_t>(n), '*');
  v.cls = cochain::class_from_cell_counts(torus, n, {{top, value}}, ring);
  v.degree = n;
  v.pairing = cochain::pair_fundamental(*v.cls);
  v.nonvanishing = !cochain::cohomologous(*v.cls, cochain::zero_cochain(torus, n, ring));
  if (ring == Ring::F2) v.generator = v.nonvanishing && v.pairing == 1;
  v.verdict = v.nonvanishing ? "nonvanishing" : "vanishing";
}

wall::DegreeResult wall_degree(const json& params, const manifest::Manifest* m, int n, std::uint64_t seed, json& record) {
  if (params.contains("wall")) {
    require(m != nullptr && params.at("wall").is_string(), ErrorKind::InvalidInput, "wall must name a manifest wall setup");
    const auto setup = manifest::wall_from_json(m->walls.at(params.at("wall").get<std::string>()));
    require(setup.family.n == n, ErrorKind::InvalidInput, "wall setup has the wrong number of parameters");
    if (setup.ledger) record["ledger"] = report::conclusion_to_json(wall::face_sign_conclusion(*setup.ledger));
    record["description"] = setup.family.description;
    return wall::boundary_degree(setup.family, seed, setup.options);
  }
  const auto fam = wall::reflection_family(n, std::vector<lattice::IntMatrix>(n, wall::h_reflection()));
  record["description"] = fam.description;
  return wall::boundary_degree(fam, seed);
}

VerdictReport k3_sum(const json& params, const manifest::Manifest* m, const Options& opts) {
  const int n = param_n(params, 1, 4);
  VerdictReport v;
  v.scenario = "k3-sum";
  v.params = params;
  const FourManifold x = repeated_sum(fourman::k3(), fourman::s2xs2(), n, "K3#" + std::to_string(n) + "(S2xS2)");
  v.manifold = x;
  const SpinC s{lattice::LatticeVector(x.lattice.rank(), 0)};
  const Int d = fourman::formal_dim_sw(x, s);
  v.computed["manifold"] = manifold_summary(x);
  v.computed["formal_dim"] = d;
  check_hypotheses(x, n, d);

  json members = json::array();
  Ring ring = Ring::Z;
  for (int i = 0; i < n; ++i) {
    const auto f = lattice::embed_block(x.lattice.rank(), 22 + 2 * static_cast<std::size_t>(i), wall::h_reflection());
    const auto rep = fourman::group_membership(x, s, f);
    require(rep.preserves_class, ErrorKind::Hypothesis, "f_" + std::to_string(i + 1) + " does not preserve c1");
    if (rep.coefficient_ring == Ring::F2) ring = Ring::F2;
    json r = report::membership_to_json(rep);
    r["name"] = "f_" + std::to_string(i + 1);
    members.push_back(r);
  }
  v.computed["membership"] = members;
  v.computed["ring"] = to_string(ring);

  json wall_record;
  const auto deg = wall_degree(params, m, n, opts.seed, wall_record);
  wall_record["result"] = report::degree_to_json(deg);
  v.computed["wall"] = wall_record;

  const Input sw = base_input(params, "sw", m, Input{1, "built-in input: SW(K3, c1 = 0) = 1"});
  v.computed["base_sw"] = {{"value", sw.value}, {"provenance", sw.provenance}};
  const auto glue = wall::gluing_count(deg.degree, sw.value);
  v.computed["gluing_count"] = {{"value", glue.value}, {"theorem_dependent", glue.theorem_dependent}};

  torus_class(v, n, glue.value, Ring::F2);
  v.assumptions.push_back({"gluing formula",
                           "the parameterized count over [0,1]^n equals (wall-crossing degree) x SW(K3, c1 = 0), mod 2"});
  v.assumptions.push_back({"base invariant SW(K3)", sw.provenance});
  v.assumptions.push_back({"mapping torus count",
                           "the count over the cube equals the class value on the top cell of T^n, as no zeros lie on the cube boundary"});
  v.homeo_triviality = "not stated: the monodromy acts nontrivially on H^2";
  return v;
}

VerdictReport composition_core(VerdictReport v, wall::CompositionTable table, bool fill_middle) {
  const int n = table.n;
  const bool power = wall::is_power_of_two(n);
  bool missing_middle = false;
  for (int k = 1; k < n; ++k)
    if (!table.values.count(k)) missing_middle = true;
  if (missing_middle && fill_middle && power) {
    for (int k = 1; k < n; ++k) table.values.emplace(k, 0);
    v.notes.push_back("middle values not supplied; their binomial coefficients are even, so they do not enter");
  }
  v.computed["table"] = manifest::composition_to_json(table);
  v.computed["n_is_power_of_two"] = power;
  if (missing_middle && !(fill_middle && power)) {
    v.verdict = "undetermined";
    v.degree = n;
    v.notes.push_back("n is not a power of two and middle values are missing; supply them to decide");
    return v;
  }
  const auto res = wall::composition_sum(table);
  v.computed["composition_sum"] = {{"value", res.value}, {"contributing", res.contributing}};
  if (n <= 4) {
    torus_class(v, n, res.value, Ring::F2);
  } else {
    v.degree = n;
    v.pairing = res.value;
    v.nonvanishing = res.value != 0;
    v.generator = v.nonvanishing;
    v.verdict = v.nonvanishing ? "nonvanishing" : "vanishing";
    v.notes.push_back("cell complexes are built for n <= 4; the pairing is reported without a cochain");
  }
  v.assumptions.push_back({"composition expansion",
                           "over F2 the tuple invariant of f_i = f_{i,0} o f_{i,1}^{-1} is the sum over all j in {0,1}^n "
                           "of the invariants of (f_{1,j_1}, ..., f_{n,j_n})"});
  v.assumptions.push_back({"symmetry", "each summand depends only on k = #{i : j_i = 0}"});
  v.assumptions.push_back({"tuple invariant pairing", "the tuple invariant equals the pairing of the class with [T^n]"});
  return v;
}

wall::CompositionTable table_from_params(const json& params, int n) {
  wall::CompositionTable t;
  t.n = n;
  if (params.contains("values")) t = manifest::composition_from_json({{"n", n}, {"values", params.at("values")}});
  return t;
}

VerdictReport dissolve(const json& params, const manifest::Manifest* m, const Options&) {
  const int n = param_n(params, 1, 4);
  VerdictReport v;
  v.scenario = "dissolve";
  v.params = params;
  const FourManifold x =
      repeated_sum(fourman::k3(), fourman::cp2_2cp2bar(), n, "K3#" + std::to_string(n) + "(CP2#2(-CP2))");
  v.manifold = x;
  lattice::LatticeVector c1(22, 0);
  for (int i = 0; i < n; ++i) c1.insert(c1.end(), {1, 1, 1});
  const Int d = fourman::formal_dim_sw(x, SpinC{c1});
  v.computed["manifold"] = manifold_summary(x);
  v.computed["formal_dim"] = d;
  check_hypotheses(x, n, d);

  const FourManifold y = fourman::cp2_sum(n + 3, 2 * n + 19);
  const auto cmp = fourman::homeo_invariants_match(x, y);
  v.computed["homeo_check"] = {{"other", y.name}, {"match", cmp.match}, {"differences", cmp.differences}};
  require(cmp.match, ErrorKind::Hypothesis, "dissolving diffeomorphism contradicts homeomorphism invariants");

  const auto id = fourman::group_membership(x, SpinC{c1}, lattice::LatticeMap{lattice::IntMatrix::identity(x.lattice.rank())});
  json member = report::membership_to_json(id);
  member["name"] = "f_i (homotopic to the identity)";
  v.computed["membership"] = json::array({member});
  v.computed["ring"] = "F2";
  v.notes.push_back("f_{i,1} reverses a homology orientation, so the expansion is evaluated over F2");

  const Input m0 = base_input(params, "sw_m0", m, Input{1, "built-in input: SW(K3, s0) = 1"});
  const Input m1 = base_input(params, "sw_m1", m, Input{2, "built-in input: SW(M1, s1) = 2 (even)"});
  wall::CompositionTable t = table_from_params(params, n);
  for (const auto& [k, value] : {std::pair{n, m0.value}, std::pair{0, m1.value}})
    require(!t.values.count(k) || t.values.at(k) == value, ErrorKind::InvalidInput,
            "composition value at k = " + std::to_string(k) + " conflicts with the endpoint input");
  t.values[n] = m0.value;
  t.values[0] = m1.value;
  v.computed["endpoints"] = {{"sw_m0", {{"value", m0.value}, {"provenance", m0.provenance}}},
                             {"sw_m1", {{"value", m1.value}, {"provenance", m1.provenance}}}};
  v = composition_core(std::move(v), t, true);
  if (v.verdict == "undetermined") return v;
  v.assumptions.push_back({"dissolving diffeomorphism", "K3 # CP2 is diffeomorphic to 3CP2 # 19(-CP2)"});
  v.assumptions.push_back({"endpoint values", "the invariant of (f_{1,j}, ..., f_{n,j}) equals SW(M_j, s_j) for j = 0, 1"});
  v.assumptions.push_back({"base invariant SW(M0)", m0.provenance});
  v.assumptions.push_back({"base invariant SW(M1)", m1.provenance});
  if (n == 1) {
    v.homeo_triviality = "trivial as a Homeo(X, s)-bundle: f_1 is topologically isotopic to the identity";
    v.assumptions.push_back({"topological isotopy", "f_1 is topologically isotopic to the identity"});
  } else {
    v.homeo_triviality = "open: triviality as a Homeo(X, s)-bundle is not known for n > 1";
  }
  return v;
}

VerdictReport composition(const json& params, const manifest::Manifest* m, const Options&) {
  VerdictReport v;
  v.scenario = "composition";
  v.params = params;
  wall::CompositionTable t;
  if (params.contains("values")) {
    t = table_from_params(params, param_n(params, 1, 1 << 20));
  } else {
    require(m != nullptr && m->composition.has_value(), ErrorKind::InvalidInput,
            "composition needs values (parameter or manifest composition table)");
    t = *m->composition;
  }
  v = composition_core(std::move(v), t, false);
  v.homeo_triviality = "not stated";
  return v;
}

VerdictReport ruberman_asd(const json& params, const manifest::Manifest* m, const Options& opts) {
  VerdictReport v;
  v.scenario = "ruberman-asd";
  v.params = params;
  FourManifold base = fourman::k3();
  SO3 p0{-6, std::vector<int>(22, 0)};
  p0.w2[0] = p0.w2[1] = 1;
  if (params.contains("manifold")) {
    require(m != nullptr && params.at("manifold").is_string(), ErrorKind::InvalidInput, "manifold must name a manifest entry");
    const auto& e = m->manifold(params.at("manifold").get<std::string>());
    require(e.aux && std::holds_alternative<SO3>(*e.aux), ErrorKind::InvalidInput, "ruberman-asd needs an so3 class on the base");
    base = e.manifold;
    p0 = std::get<SO3>(*e.aux);
  }
  const std::string warn0 = fourman::check_so3_consistency(base, p0, opts.strict);
  if (!warn0.empty()) v.notes.push_back(warn0);
  const Int d0 = fourman::formal_dim_asd(base, p0);
  require(lattice::inertia(base.lattice).b_plus >= 2, ErrorKind::Hypothesis, "hypothesis b+(M) >= 2 fails");
  require(d0 == 0, ErrorKind::Hypothesis, "hypothesis d(M, P0) = 0 fails: " + std::to_string(d0));

  const SO3 line{-1, {1, 1, 1}};
  const auto sum = fourman::connected_sum(base, fourman::cp2_2cp2bar(), p0, line);
  const auto& p = std::get<SO3>(sum.aux);
  const Int d = fourman::formal_dim_asd(sum.manifold, p);
  const std::string warn = fourman::check_so3_consistency(sum.manifold, p, opts.strict);
  if (!warn.empty()) v.notes.push_back(warn);
  require(d == -1, ErrorKind::Hypothesis, "hypothesis d(X, P) = -1 fails: " + std::to_string(d));
  v.manifold = sum.manifold;
  v.computed["base"] = manifold_summary(base);
  v.computed["base_formal_dim"] = d0;
  v.computed["manifold"] = manifold_summary(sum.manifold);
  v.computed["p1"] = p.p1;
  v.computed["formal_dim"] = d;
  v.computed["ring"] = "Z";

  const Input q = base_input(params, "q", m, std::nullopt);
  v.computed["donaldson"] = {{"value", q.value}, {"provenance", q.provenance}};
  auto circle = cochain::build_torus(1);
  v.cls = cochain::class_from_cell_counts(circle, 1, {{"*", -4 * q.value}}, Ring::Z);
  v.degree = 1;
  v.pairing = cochain::pair_fundamental(*v.cls);
  v.nonvanishing = !cochain::cohomologous(*v.cls, cochain::zero_cochain(circle, 1, Ring::Z));
  v.verdict = v.nonvanishing ? "nonvanishing" : "vanishing";
  v.notes.push_back("the global sign follows the engine orientation convention; external values agree up to sign");
  v.assumptions.push_back({"one-parameter invariant",
                           "a diffeomorphism of X preserving P and the homology orientation has invariant -4 times the "
                           "Donaldson invariant of (M, P0)"});
  v.assumptions.push_back({"invariant pairing", "that invariant equals the pairing of the class with [T^1]"});
  v.assumptions.push_back({"base invariant Donaldson(M, P0)", q.provenance});
  v.homeo_triviality = "not stated";
  return v;
}

}  // namespace

std::vector<std::string> scenario_names() { return {"k3-sum", "dissolve", "composition", "ruberman-asd"}; }

VerdictReport run_scenario(const std::string& name, const json& params, const manifest::Manifest* m, const Options& opts) {
  require(params.is_object(), ErrorKind::InvalidInput, "scenario parameters must be an object");
  VerdictReport v;
  if (name == "k3-sum")
    v = k3_sum(params, m, opts);
  else if (name == "dissolve")
    v = dissolve(params, m, opts);
  else if (name == "composition")
    v = composition(params, m, opts);
  else if (name == "ruberman-asd")
    v = ruberman_asd(params, m, opts);
  else
    fail(ErrorKind::InvalidInput, "unknown scenario " + name);
  if (m != nullptr && (!m->decompositions.empty() || m->psc_nonempty))
    v.flags = obstruction_report(v, m->decompositions, m->psc_nonempty);
  return v;
}

std::vector<ObstructionFlag> obstruction_report(const VerdictReport& v,
                                                const std::vector<manifest::Decomposition>& decompositions,
                                                std::optional<bool> psc_nonempty) {
  std::vector<ObstructionFlag> flags;
  const int n = v.degree;
  for (const auto& dec : decompositions) {
    ObstructionFlag f{dec.name, "no verdict", ""};
    if (!v.manifold) {
      f.detail = "scenario has no total manifold";
      flags.push_back(f);
      continue;
    }
    FourManifold total = dec.parts.front();
    for (std::size_t i = 1; i < dec.parts.size(); ++i) total = fourman::connected_sum(total, dec.parts[i]);
    const auto cmp = fourman::homeo_invariants_match(total, *v.manifold);
    require(cmp.match && total.lattice.rank() == v.manifold->lattice.rank(), ErrorKind::InvalidInput,
            "manifest: decomposition " + dec.name + " does not add up to " + v.manifold->name);
    if (!v.nonvanishing) {
      f.verdict = "no obstruction";
      f.detail = "the class vanishes";
      flags.push_back(f);
      continue;
    }
    std::string bplus;
    bool all_large = true;
    for (const auto& part : dec.parts) {
      const int b = lattice::inertia(part.lattice).b_plus;
      bplus += (bplus.empty() ? "" : ", ") + std::to_string(b);
      all_large = all_large && b > n;
    }
    if (all_large) {
      f.verdict = "forbidden";
      f.detail = "no fiberwise splitting with b+ = (" + bplus + ") > " + std::to_string(n) + " exists";
    } else {
      f.detail = "b+ = (" + bplus + "); every summand needs b+ > " + std::to_string(n);
    }
    flags.push_back(f);
  }
  if (psc_nonempty) {
    ObstructionFlag f{"psc", "no verdict", ""};
    if (!*psc_nonempty) {
      f.detail = "PSC(X) is not asserted to be nonempty";
    } else if (!v.nonvanishing) {
      f.verdict = "no obstruction";
      f.detail = "the class vanishes";
    } else {
      f.verdict = "obstructed";
      f.detail = "no family of PSC metrics over B^(" + std::to_string(n) + "); some pi_i(PSC) != 0, i <= " +
                 std::to_string(n - 1);
    }
    flags.push_back(f);
  }
  return flags;
}

}  // namespace famclass::scenario

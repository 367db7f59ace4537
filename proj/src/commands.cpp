#include "famclass/commands.hpp"

#include "famclass/error.hpp"
#include "famclass/report.hpp"
#include "famclass/scenario.hpp"
#include "famclass/toy_families.hpp"
#include "famclass/vnengine.hpp"

namespace famclass::commands {

namespace {

using manifest::ManifoldEntry;
using manifest::Manifest;

std::string string_arg(const json& req, const char* key) {
  require(req.contains(key) && req.at(key).is_string(), ErrorKind::InvalidInput,
          std::string("request needs a string \"") + key + "\"");
  return req.at(key).get<std::string>();
}

ManifoldEntry resolve_manifold(const Manifest& m, const std::string& name) {
  if (m.manifolds.count(name)) return m.manifolds.at(name);
  return {manifest::builtin_manifold(name), std::nullopt, {}};
}

json summary(const fourman::FourManifold& x) {
  return {{"name", x.name},
          {"b1", x.b1},
          {"rank", x.lattice.rank()},
          {"euler_char", fourman::euler_char(x)},
          {"inertia", report::inertia_to_json(lattice::inertia(x.lattice))},
          {"parity", lattice::to_string(lattice::parity(x.lattice))}};
}

json run_dim(const json& req, const Manifest& m, const Options& opts) {
  const auto e = resolve_manifold(m, string_arg(req, "manifold"));
  json out = summary(e.manifold);
  if (e.aux) {
    if (const auto* s = std::get_if<fourman::SpinC>(&*e.aux)) {
      out["class"] = "spinc";
      out["formal_dim"] = fourman::formal_dim_sw(e.manifold, *s);
    } else {
      const auto& p = std::get<fourman::SO3>(*e.aux);
      out["class"] = "so3";
      const std::string warn = fourman::check_so3_consistency(e.manifold, p, opts.strict);
      if (!warn.empty()) out["warning"] = warn;
      out["formal_dim"] = fourman::formal_dim_asd(e.manifold, p);
    }
  }
  if (req.contains("n")) {
    const int n = req.at("n").get<int>();
    out["n"] = n;
    out["bplus_condition"] = fourman::check_bplus_condition(e.manifold, n);
  }
  return out;
}

json run_membership(const json& req, const Manifest& m, const Options&) {
  const auto e = resolve_manifold(m, string_arg(req, "manifold"));
  require(e.aux.has_value(), ErrorKind::InvalidInput, "membership needs a spinc or so3 class on " + e.manifold.name);
  json diffeos = json::array();
  for (const auto& d : e.diffeos) {
    json r = {{"name", d.name}, {"isometry", lattice::is_isometry(e.manifold.lattice, d.map)}};
    if (r["isometry"].get<bool>()) {
      const auto rep = fourman::group_membership(e.manifold, *e.aux, d.map, d.h1_sign);
      r.update(report::membership_to_json(rep));
      r["orientation_sign"] = lattice::positive_orientation_sign(e.manifold.lattice, d.map) * (e.manifold.b1 > 0 ? d.h1_sign : 1);
    }
    diffeos.push_back(r);
  }
  return {{"manifold", e.manifold.name}, {"diffeos", diffeos}};
}

json run_homeo(const json& req, const Manifest& m, const Options&) {
  const auto x = resolve_manifold(m, string_arg(req, "manifold")).manifold;
  const auto y = resolve_manifold(m, string_arg(req, "other")).manifold;
  const auto cmp = fourman::homeo_invariants_match(x, y);
  return {{"manifold", summary(x)}, {"other", summary(y)}, {"match", cmp.match}, {"differences", cmp.differences}};
}

json run_wall(const json& req, const Manifest& m, const Options& opts) {
  manifest::WallSetup setup;
  if (req.contains("wall")) {
    const std::string name = string_arg(req, "wall");
    require(m.walls.count(name) > 0, ErrorKind::InvalidInput, "unknown wall " + name);
    setup = manifest::wall_from_json(m.walls.at(name));
  } else {
    setup = manifest::wall_from_json({{"type", "reflection"}, {"n", req.value("n", 1)}});
  }
  json out = {{"description", setup.family.description}, {"n", setup.family.n}};
  if (setup.ledger) {
    out["ledger"] = manifest::ledger_to_json(*setup.ledger);
    out["conclusion"] = report::conclusion_to_json(wall::face_sign_conclusion(*setup.ledger));
  }
  out["result"] = report::degree_to_json(wall::boundary_degree(setup.family, opts.seed, setup.options));
  return out;
}

json run_vn(const json& req, const Manifest& m, const Options& opts) {
  const std::string name = string_arg(req, "family");
  const auto fam = m.families.count(name) ? manifest::family_from_json(m.families.at(name)) : vn::toys::builtin(name);
  Ring ring = opts.ring.value_or(fam.orientable() ? Ring::Z : Ring::F2);
  if (req.contains("ring")) ring = manifest::ring_from_string(string_arg(req, "ring"));
  const int runs = req.value("perturbations", 1);
  require(runs >= 1, ErrorKind::InvalidInput, "perturbations must be positive");
  std::vector<std::string> zero_free;
  for (const auto& id : req.value("zero_free", json::array())) zero_free.push_back(id.get<std::string>());

  json out = {{"family", fam.name}, {"base", vn::to_string(fam.base)}, {"index", fam.index()}, {"ring", to_string(ring)}};
  std::optional<vn::FamilyClass> first;
  json runs_out = json::array();
  bool agree = true;
  auto record = [&](const vn::FinDimPerturbation& phi, std::uint64_t seed) {
    const auto cls = vn::family_class(fam, phi, ring, seed, zero_free);
    json r = {{"perturbation", report::perturbation_to_json(phi)}, {"values", cls.cochain.values}};
    if (!first) {
      first = cls;
    } else if (cls.cochain.values != first->cochain.values) {
      agree = false;
    }
    runs_out.push_back(r);
  };
  for (int i = 0; i < runs; ++i) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(i);
    const auto phi = vn::build_perturbation(fam, seed);
    record(phi, seed);
    for (const auto& extra : req.value("suspend", json::array())) record(vn::suspend(phi, extra.get<int>()), seed);
  }
  out["class"] = report::family_class_to_json(*first);
  out["runs"] = runs_out;
  out["agree"] = agree;
  require(agree, ErrorKind::NonStabilization, "counts depend on the perturbation for family " + fam.name);
  return out;
}

json run_compose(const json& req, const Manifest& m, const Options&) {
  wall::CompositionTable t;
  if (req.contains("values")) {
    t = manifest::composition_from_json({{"n", req.value("n", 0)}, {"values", req.at("values")}});
  } else {
    require(m.composition.has_value(), ErrorKind::InvalidInput, "compose needs values or a manifest composition table");
    t = *m.composition;
  }
  const auto res = wall::composition_sum(t);
  return {{"table", manifest::composition_to_json(t)},
          {"value", res.value},
          {"contributing", res.contributing},
          {"n_is_power_of_two", wall::is_power_of_two(t.n)}};
}

json run_scenario(const json& req, const Manifest& m, const Options& opts) {
  const std::string name = string_arg(req, "name");
  json params = req;
  params.erase("run");
  params.erase("name");
  return report::verdict_to_json(scenario::run_scenario(name, params, &m, {opts.seed, opts.strict}));
}

}  // namespace

json run(const json& request, const Manifest& m, const Options& opts) {
  const std::string cmd = string_arg(request, "run");
  json out;
  if (cmd == "dim")
    out = run_dim(request, m, opts);
  else if (cmd == "membership")
    out = run_membership(request, m, opts);
  else if (cmd == "homeo-check")
    out = run_homeo(request, m, opts);
  else if (cmd == "wall-degree")
    out = run_wall(request, m, opts);
  else if (cmd == "vn-run")
    out = run_vn(request, m, opts);
  else if (cmd == "compose")
    out = run_compose(request, m, opts);
  else if (cmd == "scenario")
    out = run_scenario(request, m, opts);
  else
    fail(ErrorKind::InvalidInput, "unknown command " + cmd);
  out["command"] = cmd;
  return out;
}

json run_manifest(const Manifest& m, const Options& opts) {
  std::vector<json> records;
  for (const auto& c : m.commands) records.push_back(run(c, m, opts));
  for (const auto& s : m.scenarios) {
    json req = s;
    req["run"] = "scenario";
    records.push_back(run(req, m, opts));
  }
  return report::make_report(records);
}

}  // namespace famclass::commands

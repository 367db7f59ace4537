#include "famclass/report.hpp"

#include <cmath>

#include "famclass/error.hpp"
#include "famclass/manifest.hpp"

namespace famclass::report {

namespace {

json vec_to_json(const vn::Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

// JSON has no infinity; unreachable thresholds are reported as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void flatten_into(const json& node, const std::string& path, std::vector<std::pair<std::string, json>>& out) {
  if (node.is_object()) {
    if (node.empty()) out.emplace_back(path, json::object());
    for (const auto& [key, value] : node.items()) flatten_into(value, path.empty() ? key : path + "." + key, out);
  } else if (node.is_array()) {
    if (node.empty()) out.emplace_back(path, json::array());
    for (std::size_t i = 0; i < node.size(); ++i) flatten_into(node[i], path + "." + std::to_string(i), out);
  } else {
    out.emplace_back(path, node);
  }
}

}  // namespace

Format format_from_string(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  fail(ErrorKind::InvalidInput, "unknown format " + s + " (expected text or json)");
}

json inertia_to_json(const lattice::Inertia& i) {
  return {{"b_plus", i.b_plus}, {"b_minus", i.b_minus}, {"signature", i.signature}};
}

json membership_to_json(const fourman::MembershipReport& m) {
  return {{"preserves_class", m.preserves_class},
          {"preserves_homology_orientation", m.preserves_homology_orientation},
          {"coefficient_ring", to_string(m.coefficient_ring)}};
}

json degree_to_json(const wall::DegreeResult& d) {
  json trace = json::array();
  for (const auto& l : d.trace) trace.push_back({{"subdivision", l.subdivision}, {"degree", l.degree}, {"simplices", l.simplices}});
  return {{"degree", d.degree}, {"seed", d.seed}, {"ray_draws", d.ray_draws}, {"trace", trace}};
}

json certificate_to_json(const wall::FaceCertificate& c) {
  return {{"face", wall::to_string(c.face) + "_" + std::to_string(c.axis + 1)},
          {"center", c.center},
          {"radius", c.radius},
          {"interval", {c.lo, c.hi}},
          {"certified", c.certified},
          {"required_min_T", finite_or_null(c.required_min_T)}};
}

json conclusion_to_json(const wall::LedgerConclusion& c) {
  json faces = json::array();
  for (const auto& f : c.faces) faces.push_back(certificate_to_json(f));
  return {{"faces", faces},
          {"opposite_signs", c.opposite_signs},
          {"required_min_T", finite_or_null(c.required_min_T)},
          {"statement", c.statement}};
}

json count_to_json(const vn::CountResult& c) {
  json trace = json::array();
  for (const auto& l : c.trace)
    trace.push_back({{"level", l.level}, {"grid", l.grid}, {"signed_count", l.signed_count}, {"zeros", l.zeros}});
  json zeros = json::array();
  for (const auto& z : c.zeros) zeros.push_back({{"fiber", vec_to_json(z.fiber)}, {"base", vec_to_json(z.base)}, {"sign", z.sign}});
  return {{"cell", c.cell},         {"ring", to_string(c.ring)}, {"value", c.value}, {"signed_count", c.signed_count},
          {"redraws", c.redraws},   {"trace", trace},            {"zeros", zeros}};
}

json family_class_to_json(const vn::FamilyClass& f) {
  json cells = json::array();
  for (const auto& c : f.cells) cells.push_back(count_to_json(c));
  return {{"cochain", manifest::cochain_to_json(f.cochain)}, {"cells", cells}};
}

json perturbation_to_json(const vn::FinDimPerturbation& p) {
  json charges = json::array();
  for (const auto& c : p.charges)
    charges.push_back({{"cell", c.cell},
                       {"base_center", vec_to_json(c.base_center)},
                       {"fiber_center", vec_to_json(c.fiber_center)},
                       {"radius", c.radius},
                       {"directions", c.map.cols()}});
  return {{"dimension", p.dimension()}, {"extra_dims", p.extra_dims}, {"epsilon", p.epsilon},
          {"seed", p.seed},             {"charges", charges}};
}

json verdict_to_json(const scenario::VerdictReport& v) {
  json assumptions = json::array();
  for (const auto& a : v.assumptions) assumptions.push_back({{"name", a.name}, {"statement", a.statement}});
  json flags = json::array();
  for (const auto& f : v.flags) flags.push_back({{"subject", f.subject}, {"verdict", f.verdict}, {"detail", f.detail}});
  json out = {{"scenario", v.scenario},
              {"params", v.params},
              {"computed", v.computed},
              {"pairing", v.pairing},
              {"degree", v.degree},
              {"nonvanishing", v.nonvanishing},
              {"verdict", v.verdict},
              {"homeo_triviality", v.homeo_triviality},
              {"assumptions", assumptions},
              {"notes", v.notes},
              {"obstructions", flags}};
  out["class"] = v.cls ? manifest::cochain_to_json(*v.cls) : json(nullptr);
  out["generator"] = v.generator ? json(*v.generator) : json(nullptr);
  out["manifold"] = v.manifold ? json(v.manifold->name) : json(nullptr);
  return out;
}

json make_report(const std::vector<json>& records) {
  json doc = {{"schema", kSchema}};
  if (!records.empty()) doc["records"] = records;
  return doc;
}

std::vector<std::pair<std::string, json>> flatten(const json& doc) {
  std::vector<std::pair<std::string, json>> out;
  flatten_into(doc, "", out);
  return out;
}

std::string emit_report(const json& doc, Format format) {
  if (format == Format::Json) return doc.dump(2) + "\n";
  std::string out;
  for (const auto& [path, value] : flatten(doc)) out += path + " = " + value.dump() + "\n";
  return out;
}

}  // namespace famclass::report

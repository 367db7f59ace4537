// famclass command-line front end.
//
// Exit codes: 0 computed, 1 invalid input or usage, 2 hypothesis failure,
// 3 numerical non-stabilization.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "famclass/commands.hpp"
#include "famclass/error.hpp"
#include "famclass/manifest.hpp"
#include "famclass/report.hpp"

namespace {

using famclass::ErrorKind;
using json = nlohmann::json;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Hypothesis:
      return 2;
    case ErrorKind::NonStabilization:
      return 3;
    default:
      return 1;
  }
}

json parse_values(const std::string& csv) {
  json out = json::array();
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      famclass::fail(ErrorKind::InvalidInput, "--values expects comma-separated integers, got " + item);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"famclass: characteristic classes of 4-manifold families at desk scale"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string manifest_path;
  std::string ring = "auto";
  std::uint64_t seed = 1;
  bool strict = false;
  std::string format = "text";
  app.add_option("--manifest", manifest_path, "JSON manifest");
  app.add_option("--ring", ring, "coefficient ring for vn-run")->check(CLI::IsMember({"auto", "z", "f2"}));
  app.add_option("--seed", seed, "seed for perturbations and rays");
  app.add_flag("--strict", strict, "treat consistency warnings as errors");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));

  std::string manifold, other, wall, family, name, values;
  std::optional<int> n;
  std::optional<long long> q, sw;
  int perturbations = 1;
  std::vector<int> suspend;

  auto* dim = app.add_subcommand("dim", "Euler characteristic, inertia, parity and formal dimension");
  dim->add_option("--manifold", manifold, "manifest entry or built-in name")->required();
  dim->add_option("--n", n, "check b+ >= n + 2");

  auto* member = app.add_subcommand("membership", "structure-group membership of the manifest diffeos");
  member->add_option("--manifold", manifold)->required();

  auto* homeo = app.add_subcommand("homeo-check", "compare (b1, b+, b-, parity)");
  homeo->add_option("--manifold", manifold)->required();
  homeo->add_option("--other", other)->required();

  auto* wall_cmd = app.add_subcommand("wall-degree", "boundary mapping degree of a wall family");
  wall_cmd->add_option("--wall", wall, "manifest wall setup");
  wall_cmd->add_option("--n", n, "reflection family on nH, exact limit");

  auto* vn_cmd = app.add_subcommand("vn-run", "family class of a toy section");
  vn_cmd->add_option("--family", family, "manifest family or built-in name")->required();
  vn_cmd->add_option("--perturbations", perturbations, "independent perturbations to compare");
  vn_cmd->add_option("--suspend", suspend, "extra perturbation directions to test");

  auto* compose = app.add_subcommand("compose", "mod-2 composition sum");
  compose->add_option("--n", n);
  compose->add_option("--values", values, "v_0,...,v_n indexed by k");

  auto* scen = app.add_subcommand("scenario", "run a built-in scenario");
  scen->add_option("--name", name, "k3-sum | dissolve | composition | ruberman-asd")->required();
  scen->add_option("--n", n);
  scen->add_option("--values", values, "composition values v_0,...,v_n");
  scen->add_option("--q", q, "Donaldson invariant input (ruberman-asd)");
  scen->add_option("--sw", sw, "base SW input (k3-sum)");
  scen->add_option("--wall", wall, "manifest wall setup (k3-sum)");

  auto* rep = app.add_subcommand("report", "run every command and scenario listed in the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    famclass::manifest::Manifest m;
    if (!manifest_path.empty()) m = famclass::manifest::load_manifest(manifest_path);
    famclass::commands::Options opts;
    opts.seed = seed;
    opts.strict = strict;
    if (ring != "auto") opts.ring = famclass::manifest::ring_from_string(ring);
    const auto fmt = famclass::report::format_from_string(format);

    json doc;
    if (rep->parsed()) {
      doc = famclass::commands::run_manifest(m, opts);
    } else {
      json req;
      if (dim->parsed()) {
        req = {{"run", "dim"}, {"manifold", manifold}};
        if (n) req["n"] = *n;
      } else if (member->parsed()) {
        req = {{"run", "membership"}, {"manifold", manifold}};
      } else if (homeo->parsed()) {
        req = {{"run", "homeo-check"}, {"manifold", manifold}, {"other", other}};
      } else if (wall_cmd->parsed()) {
        req = {{"run", "wall-degree"}};
        if (!wall.empty()) req["wall"] = wall;
        req["n"] = n.value_or(1);
      } else if (vn_cmd->parsed()) {
        req = {{"run", "vn-run"}, {"family", family}, {"perturbations", perturbations}, {"suspend", suspend}};
      } else if (compose->parsed()) {
        req = {{"run", "compose"}};
        if (!values.empty()) {
          req["values"] = parse_values(values);
          req["n"] = n.value_or(static_cast<int>(req["values"].size()) - 1);
        }
      } else if (scen->parsed()) {
        req = {{"run", "scenario"}, {"name", name}};
        if (n) req["n"] = *n;
        if (!values.empty()) {
          req["values"] = parse_values(values);
          if (!n) req["n"] = static_cast<int>(req["values"].size()) - 1;
        }
        if (q) req["q"] = *q;
        if (sw) req["sw"] = *sw;
        if (!wall.empty()) req["wall"] = wall;
      }
      doc = famclass::report::make_report({famclass::commands::run(req, m, opts)});
    }
    std::cout << famclass::report::emit_report(doc, fmt);
    return 0;
  } catch (const famclass::Error& e) {
    std::cerr << "famclass: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "famclass: " << e.what() << "\n";
    return 1;
  }
}

#include <doctest.h>

#include <sstream>

#include "famclass/commands.hpp"
#include "famclass/manifest.hpp"
#include "famclass/report.hpp"
#include "famclass/scenario.hpp"
#include "test_util.hpp"

using namespace famclass;
using json = nlohmann::json;
using lattice::Int;
namespace mf = famclass::manifest;
namespace sc = famclass::scenario;

namespace {

json minimal_manifest() {
  return json::parse(R"({
    "manifolds": {
      "X": {"manifold": {"sum": ["k3", "s2xs2"]},
            "spinc": {"c1": [0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]},
            "diffeos": [{"name": "f", "block": [[-1,0],[0,-1]], "offset": 22}]},
      "Y": {"manifold": {"name": "Y", "b1": 0, "lattice": {"blocks": [{"type": "H", "copies": 4}, {"type": "E8", "sign": -1, "copies": 2}]}}}
    },
    "base_invariants": {"sw": {"value": 1, "provenance": "test value"}},
    "scenarios": [{"name": "k3-sum", "n": 1, "sw": "sw"}]
  })");
}

std::map<std::string, json> parse_text(const std::string& text) {
  std::map<std::string, json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    REQUIRE(eq != std::string::npos);
    out[line.substr(0, eq)] = json::parse(line.substr(eq + 3));
  }
  return out;
}

mf::Decomposition split(std::vector<std::string> lattices) {
  mf::Decomposition d;
  d.name = "split";
  for (const auto& l : lattices) d.parts.push_back(mf::manifold_from_json(json::parse(l)));
  return d;
}

}  // namespace

TEST_CASE("rationals and lattices round-trip") {
  CHECK(mf::rational_from_json(json(3)) == 3);
  CHECK(mf::rational_from_json(json("-2/6")) == lattice::Rational(-1, 3));
  CHECK(mf::rational_from_json(json(0.5)) == lattice::Rational(1, 2));
  CHECK(mf::rational_to_json(lattice::Rational(4, 2)) == json(2));
  CHECK(mf::rational_to_json(lattice::Rational(1, 3)) == json("1/3"));
  CHECK(testutil::error_kind([] { mf::rational_from_json(json("1/0")); }) == ErrorKind::InvalidInput);

  const auto l = mf::lattice_from_json(json::parse(R"({"blocks": [{"type": "H", "copies": 3}, {"type": "E8", "sign": -1, "copies": 2}]})"));
  CHECK(l.rank() == 22);
  CHECK(lattice::inertia(l) == lattice::Inertia{3, 19, -16});
  CHECK(mf::lattice_from_json(mf::lattice_to_json(l)).gram() == l.gram());
  const auto m = lattice::IntMatrix::from_rows({{1, 2}, {3, 4}});
  CHECK(mf::matrix_from_json(mf::matrix_to_json(m)) == m);
}

TEST_CASE("manifolds, classes and cochains round-trip") {
  const auto x = mf::manifold_from_json(json::parse(R"({"sum": ["k3", {"builtin": "s2xs2", "copies": 2}]})"));
  CHECK(x.lattice.rank() == 26);
  CHECK(mf::manifold_from_json(mf::manifold_to_json(x)).lattice.gram() == x.lattice.gram());
  CHECK(testutil::error_kind([] { mf::builtin_manifold("nope"); }) == ErrorKind::InvalidInput);

  const fourman::AuxClass so3 = fourman::SO3{-6, {1, 1, 0}};
  const auto back = mf::aux_from_json(mf::aux_to_json(so3), 3);
  REQUIRE(back.has_value());
  CHECK(std::get<fourman::SO3>(*back).p1 == -6);
  CHECK(std::get<fourman::SO3>(*back).w2 == std::vector<int>{1, 1, 0});
  CHECK(testutil::error_kind([] { mf::aux_from_json(json::parse(R"({"spinc": {"c1": [0]}})"), 2); }) ==
        ErrorKind::InvalidInput);

  const auto c = mf::cochain_from_json(json::parse(R"({"complex": {"builtin": "torus", "n": 2}, "degree": 1, "ring": "Z", "values": {"*0": 3, "0*": -1}})"));
  CHECK(c.at("*0") == 3);
  const auto c2 = mf::cochain_from_json(mf::cochain_to_json(c));
  CHECK(c2.values == c.values);
  CHECK(c2.complex->count(1) == 2);

  const auto t = mf::composition_from_json(json::parse(R"({"n": 2, "values": [1, 0, 1]})"));
  CHECK(mf::composition_from_json(mf::composition_to_json(t)).values == t.values);
  const auto l = mf::ledger_from_json(json::parse(R"({"constants": {"C1": 1, "C17": 10, "C18": 10}, "T": 20, "Ti": [10, 10], "baselines": [2, "3/2"]})"));
  const auto l2 = mf::ledger_from_json(mf::ledger_to_json(l));
  CHECK(l2.Ti == l.Ti);
  CHECK(l2.baselines == l.baselines);
}

TEST_CASE("families and walls parse") {
  const auto fam = mf::family_from_json(json::parse(R"({"name": "cubic", "base": "point", "fiber_dim": 1, "components": ["x0^3 - x0"], "radius": 2})"));
  CHECK(vn::count_point(fam, vn::build_perturbation(fam, 1), Ring::Z, 1).value == 1);
  CHECK(mf::family_from_json(json("moebius-1")).name == "moebius-1");
  CHECK(testutil::error_kind([] { mf::family_from_json(json::parse(R"({"name": "bad", "components": ["x0 +"]})")); }) ==
        ErrorKind::InvalidInput);

  const auto w = mf::wall_from_json(json::parse(R"({"type": "custom", "lattice": {"blocks": [{"type": "diag", "entries": [1]}]}, "gammas": [[1]], "sigma": ["2*b0 - 1"]})"));
  CHECK(wall::boundary_degree(w.family).degree == 1);
  const auto r = mf::wall_from_json(json::parse(R"({"type": "reflection", "n": 2, "subdivision": {"min_levels": 3}})"));
  CHECK(r.options.min_levels == 3);
  CHECK(std::abs(wall::boundary_degree(r.family, 1, r.options).degree) == 1);
}

TEST_CASE("manifest validation") {
  CHECK_NOTHROW(mf::parse_manifest(minimal_manifest()));
  const auto m = mf::parse_manifest(minimal_manifest());
  CHECK(m.manifold("X").diffeos.size() == 1);
  CHECK(m.invariant("sw").value == 1);

  auto j = minimal_manifest();
  j["base_invariants"]["sw"].erase("provenance");
  CHECK(testutil::error_kind([&] { mf::parse_manifest(j); }) == ErrorKind::InvalidInput);

  j = minimal_manifest();
  j["scenarios"][0]["sw"] = "missing";
  CHECK(testutil::error_kind([&] { mf::parse_manifest(j); }) == ErrorKind::InvalidInput);

  j = minimal_manifest();
  j["unknown"] = 1;
  CHECK(testutil::error_kind([&] { mf::parse_manifest(j); }) == ErrorKind::InvalidInput);

  j = minimal_manifest();
  j["manifolds"]["X"]["diffeos"][0]["offset"] = 23;
  CHECK(testutil::error_kind([&] { mf::parse_manifest(j); }) == ErrorKind::InvalidInput);

  j = minimal_manifest();
  j["commands"] = json::array({{{"run", "homeo-check"}, {"manifold", "X"}, {"other", "Z"}}});
  CHECK(testutil::error_kind([&] { mf::parse_manifest(j); }) == ErrorKind::InvalidInput);
  CHECK(testutil::error_kind([] { mf::load_manifest("/nonexistent/manifest.json"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("report emission is deterministic and both formats agree") {
  const auto m = mf::parse_manifest(minimal_manifest());
  const commands::Options opts;
  const json doc = commands::run_manifest(m, opts);
  const json again = commands::run_manifest(m, opts);
  for (auto fmt : {report::Format::Json, report::Format::Text}) CHECK(report::emit_report(doc, fmt) == report::emit_report(again, fmt));

  const json parsed = json::parse(report::emit_report(doc, report::Format::Json));
  CHECK(parsed == doc);
  const auto text = parse_text(report::emit_report(doc, report::Format::Text));
  const auto flat = report::flatten(parsed);
  CHECK(text.size() == flat.size());
  for (const auto& [path, value] : flat) {
    CAPTURE(path);
    REQUIRE(text.count(path) == 1);
    CHECK(text.at(path) == value);
  }
  CHECK(parsed.at("schema") == report::kSchema);
  CHECK(parsed.at("records").at(0).at("verdict") == "nonvanishing");

  const json empty = report::make_report({});
  CHECK(empty == json{{"schema", report::kSchema}});
  CHECK(report::emit_report(empty, report::Format::Text) == "schema = \"famclass/1\"\n");
  CHECK(testutil::error_kind([] { report::format_from_string("yaml"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("k3-sum scenarios") {
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    const auto v = sc::run_scenario("k3-sum", {{"n", n}});
    CHECK(v.verdict == "nonvanishing");
    CHECK(v.degree == n);
    CHECK(v.pairing == 1);
    REQUIRE(v.generator.has_value());
    CHECK(*v.generator);
    REQUIRE(v.cls.has_value());
    CHECK(v.cls->ring == Ring::F2);
    CHECK(v.computed.at("formal_dim") == -n);
    CHECK(v.assumptions.size() >= 2);
    CHECK_FALSE(v.homeo_triviality.empty());
  }
  CHECK(sc::run_scenario("k3-sum", {{"n", 2}, {"sw", 2}}).verdict == "vanishing");
  CHECK(testutil::error_kind([] { sc::run_scenario("k3-sum", {{"n", 0}}); }) == ErrorKind::InvalidInput);
  CHECK(testutil::error_kind([] { sc::run_scenario("nope", json::object()); }) == ErrorKind::InvalidInput);
}

TEST_CASE("property: composition with n = 2 ignores the middle value") {
  for (Int x = -3; x <= 3; ++x) {
    const auto v = sc::run_scenario("composition", {{"n", 2}, {"values", {1, x, 0}}});
    CHECK(v.pairing == 1);
    CHECK(v.verdict == "nonvanishing");
  }
  CHECK(sc::run_scenario("composition", {{"n", 3}, {"values", {1, 1, 0, 0}}}).verdict == "vanishing");
  const auto big = sc::run_scenario("composition", {{"n", 8}, {"values", {1, 0, 0, 0, 0, 0, 0, 0, 0}}});
  CHECK(big.verdict == "nonvanishing");
  CHECK_FALSE(big.cls.has_value());
}

TEST_CASE("dissolve scenarios") {
  const auto v1 = sc::run_scenario("dissolve", {{"n", 1}});
  CHECK(v1.verdict == "nonvanishing");
  CHECK(v1.homeo_triviality.rfind("trivial", 0) == 0);
  const auto v2 = sc::run_scenario("dissolve", {{"n", 2}});
  CHECK(v2.verdict == "nonvanishing");
  CHECK(v2.homeo_triviality.rfind("open", 0) == 0);
  CHECK(sc::run_scenario("dissolve", {{"n", 3}}).verdict == "undetermined");
  CHECK(sc::run_scenario("dissolve", {{"n", 3}, {"values", {2, 1, 0, 1}}}).verdict == "vanishing");
  CHECK(sc::run_scenario("dissolve", {{"n", 2}, {"sw_m0", 2}}).verdict == "vanishing");
  CHECK(testutil::error_kind([] { sc::run_scenario("dissolve", {{"n", 2}, {"values", {2, 0, 3}}}); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("ruberman-asd scenario") {
  for (Int q : {-2, -1, 0, 1, 3}) {
    const auto v = sc::run_scenario("ruberman-asd", {{"q", q}});
    CHECK(v.pairing == -4 * q);
    CHECK(v.nonvanishing == (q != 0));
    CHECK(v.computed.at("formal_dim") == -1);
    CHECK(v.computed.at("p1") == -7);
  }
  CHECK(testutil::error_kind([] { sc::run_scenario("ruberman-asd", json::object()); }) == ErrorKind::InvalidInput);
}

TEST_CASE("obstruction verdicts") {
  const auto v = sc::run_scenario("k3-sum", {{"n", 1}});
  const auto half = R"({"name": "half", "b1": 0, "lattice": {"blocks": [{"type": "H", "copies": 2}, {"type": "E8", "sign": -1}]}})";
  auto flags = sc::obstruction_report(v, {split({half, half})}, std::nullopt);
  REQUIRE(flags.size() == 1);
  CHECK(flags[0].verdict == "forbidden");

  flags = sc::obstruction_report(v, {split({R"("k3")", R"("s2xs2")"})}, true);
  REQUIRE(flags.size() == 2);
  CHECK(flags[0].verdict == "no verdict");
  CHECK(flags[1].verdict == "obstructed");

  const auto zero = sc::run_scenario("k3-sum", {{"n", 1}, {"sw", 0}});
  flags = sc::obstruction_report(zero, {split({half, half})}, true);
  CHECK(flags[0].verdict == "no obstruction");
  CHECK(flags[1].verdict == "no obstruction");
  CHECK(sc::obstruction_report(v, {}, false).at(0).verdict == "no verdict");

  CHECK(testutil::error_kind([&] { sc::obstruction_report(v, {split({R"("k3")", R"("k3")"})}, std::nullopt); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("property: verdicts do not depend on the seed") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sc::Options opts;
    opts.seed = seed;
    for (int n = 1; n <= 3; ++n) {
      CHECK(sc::run_scenario("k3-sum", {{"n", n}}, nullptr, opts).pairing == 1);
      CHECK(sc::run_scenario("dissolve", {{"n", n}}, nullptr, opts).verdict == (n == 3 ? "undetermined" : "nonvanishing"));
    }
    CHECK(sc::run_scenario("dissolve", {{"n", 3}, {"values", {2, 1, 1, 1}}}, nullptr, opts).verdict == "nonvanishing");
  }
}

TEST_CASE("commands") {
  const auto m = mf::parse_manifest(minimal_manifest());
  commands::Options opts;
  const auto dim = commands::run({{"run", "dim"}, {"manifold", "X"}, {"n", 1}}, m, opts);
  CHECK(dim.at("command") == "dim");
  const auto homeo = commands::run({{"run", "homeo-check"}, {"manifold", "X"}, {"other", "Y"}}, m, opts);
  CHECK(homeo.at("command") == "homeo-check");
  const auto wd = commands::run({{"run", "wall-degree"}, {"n", 2}}, m, opts);
  CHECK(std::abs(wd.at("result").at("degree").get<int>()) == 1);
  const auto vn = commands::run({{"run", "vn-run"}, {"family", "moebius-1"}, {"perturbations", 2}, {"suspend", {1, 2}}}, m, opts);
  CHECK(vn.at("command") == "vn-run");
  CHECK(commands::run({{"run", "compose"}, {"n", 2}, {"values", {1, 5, 0}}}, m, opts).at("command") == "compose");
  CHECK(testutil::error_kind([&] { commands::run({{"run", "vn-run"}, {"family", "moebius-1"}}, m, commands::Options{1, false, Ring::Z}); }) ==
        ErrorKind::Hypothesis);
  CHECK(testutil::error_kind([&] { commands::run({{"run", "frobnicate"}}, m, opts); }) == ErrorKind::InvalidInput);
}

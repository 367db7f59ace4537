#include <doctest.h>

#include <cmath>
#include <complex>

#include "famclass/toy_families.hpp"
#include "famclass/vnengine.hpp"
#include "test_util.hpp"

using namespace famclass;
using namespace famclass::vn;

namespace {

using Cplx = std::complex<double>;

ToyFredholmFamily planar(std::string name, double radius, std::function<Cplx(Cplx)> f) {
  ToyFredholmFamily fam;
  fam.name = std::move(name);
  fam.fiber_dim = 2;
  fam.target_dim = 2;
  fam.radius = radius;
  fam.section = [f](const Vec&, const Vec& x) {
    const Cplx w = f(Cplx(x[0], x[1]));
    Vec s(2);
    s << w.real(), w.imag();
    return s;
  };
  return fam;
}

ToyFredholmFamily line(std::string name, double radius, std::function<double(double)> f) {
  ToyFredholmFamily fam;
  fam.name = std::move(name);
  fam.radius = radius;
  fam.section = [f](const Vec&, const Vec& x) {
    Vec s(1);
    s[0] = f(x[0]);
    return s;
  };
  return fam;
}

// Winding number of f around 0 along the boundary of [-r, r]^2, from summed
// argument increments on a fine polygon.
int winding_oracle(const std::function<Cplx(Cplx)>& f, double r) {
  const int steps = 4000;
  const Cplx corners[4] = {{-r, -r}, {r, -r}, {r, r}, {-r, r}};
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    const Cplx a = corners[side], b = corners[(side + 1) % 4];
    for (int i = 0; i < steps; ++i) {
      const Cplx p = f(a + (b - a) * (double(i) / steps));
      const Cplx q = f(a + (b - a) * (double(i + 1) / steps));
      total += std::arg(q / p);
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * std::acos(-1.0))));
}

Int point_count(const ToyFredholmFamily& fam, Ring ring, std::uint64_t seed = 1) {
  return count_point(fam, build_perturbation(fam, seed), ring, seed).value;
}

Int top_value(const ToyFredholmFamily& fam, Ring ring, std::uint64_t seed = 1) {
  const FamilyClass c = family_class(fam, build_perturbation(fam, seed), ring, seed);
  return c.cochain.values.back();
}

// Moebius section with the second component scaled by c.
ToyFredholmFamily scaled_moebius(double c) {
  ToyFredholmFamily fam = toys::moebius();
  fam.name = "moebius-scaled";
  fam.section = [c](const Vec& b, const Vec& x) {
    Vec s(2);
    s << x[0], c * std::cos(std::acos(-1.0) * b[0]);
    return s;
  };
  return fam;
}

}  // namespace

TEST_CASE("perturbations charge only degenerate zeros") {
  CHECK(build_perturbation(toys::line_identity(), 1).charges.empty());
  CHECK(build_perturbation(toys::line_cubic(), 1).charges.empty());
  const auto sq = build_perturbation(toys::line_square(), 1);
  REQUIRE(sq.charges.size() == 1);
  CHECK(sq.dimension() == 1);
  const auto z2 = build_perturbation(toys::planar_z2(), 1);
  REQUIRE(z2.charges.size() == 1);
  CHECK(z2.dimension() == 2);
  CHECK(suspend(z2, 3).dimension() == 5);
  CHECK(testutil::error_kind([&] { suspend(z2, -1); }) == ErrorKind::InvalidInput);
}

TEST_CASE("point counts") {
  CHECK(point_count(toys::line_identity(), Ring::Z) == 1);
  CHECK(point_count(toys::line_cubic(), Ring::Z) == 1);
  CHECK(point_count(toys::line_square(), Ring::Z) == 0);
  CHECK(point_count(toys::line_positive(), Ring::Z) == 0);
  CHECK(point_count(toys::planar_z2(), Ring::Z) == 2);
  CHECK(point_count(toys::planar_z2(), Ring::F2) == 0);
  CHECK(point_count(line("minus-x", 1.0, [](double x) { return -x; }), Ring::Z) == -1);
  const auto r = count_point(toys::line_cubic(), build_perturbation(toys::line_cubic(), 1), Ring::Z, 1);
  CHECK(r.zeros.size() == 3);
  CHECK_FALSE(r.trace.empty());
}

TEST_CASE("point count errors") {
  CHECK(testutil::error_kind([] { point_count(toys::moebius(), Ring::F2); }) == ErrorKind::InvalidInput);
  ToyFredholmFamily rect = toys::planar_z2();
  rect.target_dim = 1;
  rect.section = [](const Vec&, const Vec& x) {
    Vec s(1);
    s[0] = x.squaredNorm() + 1.0;
    return s;
  };
  CHECK(testutil::error_kind([&] { count_point(rect, FinDimPerturbation{}, Ring::Z, 1); }) == ErrorKind::Hypothesis);
  const auto improper = line("improper", 1.0, [](double x) { return x - 1.0; });
  CHECK(testutil::error_kind([&] { point_count(improper, Ring::Z); }) == ErrorKind::Hypothesis);
  auto declared = toys::line_identity();
  declared.s_min = 2.0;
  CHECK(testutil::error_kind([&] { properness_margin(declared); }) == ErrorKind::Hypothesis);
  CHECK(properness_margin(toys::line_identity()) == doctest::Approx(1.0));
}

TEST_CASE("property: planar counts agree with the winding-number oracle") {
  struct Case {
    std::string name;
    double radius;
    std::function<Cplx(Cplx)> f;
  };
  const std::vector<Case> cases = {
      {"z2", 2.0, [](Cplx z) { return z * z; }},
      {"z3", 2.0, [](Cplx z) { return z * z * z; }},
      {"conj", 1.0, [](Cplx z) { return std::conj(z); }},
      {"z2-shift", 2.0, [](Cplx z) { return z * z - 0.25; }},
      {"z3-z", 2.0, [](Cplx z) { return z * z * z - z; }},
      {"z-conj2", 2.0, [](Cplx z) { return z * std::conj(z) * std::conj(z) + Cplx(0.1, 0.0); }},
      {"const", 1.0, [](Cplx) { return Cplx(1.0, 0.5); }},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const int w = winding_oracle(c.f, c.radius);
    const auto fam = planar(c.name, c.radius, c.f);
    CHECK(point_count(fam, Ring::Z) == w);
    CHECK(point_count(fam, Ring::F2) == reduce(Ring::F2, w));
  }
}

TEST_CASE("family classes of the toy families") {
  CHECK(top_value(toys::untwisted(), Ring::Z) == 0);
  CHECK(top_value(toys::untwisted(), Ring::F2) == 0);
  CHECK(top_value(toys::moebius(), Ring::F2) == 1);
  CHECK(top_value(toys::winding(), Ring::Z) == 1);
  const auto prod = family_class(toys::moebius_product(2), build_perturbation(toys::moebius_product(2), 1), Ring::F2, 1);
  CHECK(prod.cochain.degree == 2);
  CHECK(cochain::pair_fundamental(prod.cochain) == 1);
  CHECK_FALSE(toys::moebius().orientable());
  CHECK(toys::winding().orientable());
  CHECK(testutil::error_kind([] { top_value(toys::moebius(), Ring::Z); }) == ErrorKind::Hypothesis);
}

TEST_CASE("zero-free cells are checked") {
  const auto fam = toys::moebius();
  const auto phi = build_perturbation(fam, 1);
  CHECK(testutil::error_kind([&] { family_class(fam, phi, Ring::F2, 1, {"*"}); }).has_value());
  const auto u = family_class(toys::untwisted(), build_perturbation(toys::untwisted(), 1), Ring::F2, 1, {"*"});
  CHECK(u.cochain.values == std::vector<Int>{0});
}

TEST_CASE("twisted assembly") {
  ToyFredholmFamily cube = toys::moebius();
  cube.base = BaseKind::Cube;
  cube.monodromy.clear();
  const Transition flip = toys::moebius().monodromy[0];
  const auto twisted = assemble_twisted_family(cube, {flip});
  CHECK(top_value(twisted, Ring::F2) == 1);

  ToyFredholmFamily periodic = toys::untwisted();
  periodic.base = BaseKind::Cube;
  const Transition id{Mat::Identity(1, 1), Mat::Identity(2, 2)};
  CHECK(top_value(assemble_twisted_family(periodic, {id}), Ring::Z) == 0);
  // The Moebius section does not satisfy the identity gluing.
  CHECK(testutil::error_kind([&] { assemble_twisted_family(cube, {id}); }) == ErrorKind::InvalidInput);
  CHECK(testutil::error_kind([&] { assemble_twisted_family(toys::moebius(), {flip}); }) == ErrorKind::InvalidInput);

  // Two transitions that do not commute violate the cocycle condition.
  ToyFredholmFamily sq;
  sq.name = "square";
  sq.base = BaseKind::Cube;
  sq.base_dim = 2;
  sq.fiber_dim = 2;
  sq.target_dim = 4;
  sq.section = [](const Vec&, const Vec& x) {
    Vec s(4);
    s << x[0], x[1], 1.0, 1.0;
    return s;
  };
  Transition a{Mat::Identity(2, 2), Mat::Identity(4, 4)}, b = a;
  a.fiber << 0, 1, 1, 0;
  a.target.topLeftCorner(2, 2) << 0, 1, 1, 0;
  b.fiber << 1, 0, 0, -1;
  b.target.topLeftCorner(2, 2) << 1, 0, 0, -1;
  CHECK(testutil::error_kind([&] { assemble_twisted_family(sq, {a, b}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("property: perturbation independence and suspension") {
  for (const std::string name : {"line-square", "planar-z2", "moebius-1", "winding-1"}) {
    CAPTURE(name);
    const auto fam = toys::builtin(name);
    const Ring ring = fam.orientable() ? Ring::Z : Ring::F2;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto phi1 = build_perturbation(fam, seed);
      const auto phi2 = build_perturbation(fam, seed + 100);
      CHECK(check_perturbation_independence(fam, phi1, phi2, ring, seed).agree);
      for (int extra = 1; extra <= 3; ++extra)
        CHECK(check_perturbation_independence(fam, phi1, suspend(phi2, extra), ring, seed).agree);
    }
  }
}

TEST_CASE("cobordism invariance") {
  const auto shifted = line("cubic-shift", 2.0, [](double x) { return x * x * x - x + 0.1; });
  const auto v = check_cobordism_invariance(toys::line_cubic(), shifted, Ring::Z, 1);
  CHECK(v.agree);
  CHECK(v.boundary_margin > 0.0);
  CHECK(check_cobordism_invariance(toys::moebius(), scaled_moebius(2.0), Ring::F2, 1).agree);

  const auto minus = line("minus-x", 1.0, [](double x) { return -x; });
  try {
    check_cobordism_invariance(toys::line_identity(), minus, Ring::Z, 1);
    FAIL("expected a vanishing homotopy");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Hypothesis);
    CHECK(std::string(e.what()).find("tau") != std::string::npos);
  }
  CHECK(testutil::error_kind([&] { check_cobordism_invariance(toys::line_identity(), toys::planar_z2(), Ring::Z, 1); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("property: naturality under self-covers of the circle") {
  for (int k = 1; k <= 4; ++k) {
    CHECK(top_value(pullback_degree(toys::winding(), k), Ring::Z) == k);
    CHECK(top_value(pullback_degree(toys::moebius(), k), Ring::F2) == k % 2);
  }
  CHECK(testutil::error_kind([] { pullback_degree(toys::planar_z2(), 2); }) == ErrorKind::InvalidInput);
}

TEST_CASE("property: F2 classes are mod-2 reductions of Z classes") {
  for (const std::string name : {"line-identity", "line-cubic", "line-square", "planar-z2", "winding-1", "untwisted-1"}) {
    CAPTURE(name);
    const auto fam = toys::builtin(name);
    const auto z = family_class(fam, build_perturbation(fam, 3), Ring::Z, 3);
    const auto f = family_class(fam, build_perturbation(fam, 3), Ring::F2, 3);
    REQUIRE(z.cochain.values.size() == f.cochain.values.size());
    for (std::size_t i = 0; i < z.cochain.values.size(); ++i)
      CHECK(f.cochain.values[i] == reduce(Ring::F2, z.cochain.values[i]));
  }
}

TEST_CASE("counts are stable under refinement and deterministic") {
  CountOptions coarse, fine;
  coarse.initial_grid = 8;
  fine.initial_grid = 32;
  for (const std::string name : {"line-cubic", "planar-z2", "winding-1"}) {
    const auto fam = toys::builtin(name);
    const auto a = family_class(fam, build_perturbation(fam, 1, coarse), Ring::Z, 1, {}, coarse);
    const auto b = family_class(fam, build_perturbation(fam, 1, fine), Ring::Z, 1, {}, fine);
    const auto c = family_class(fam, build_perturbation(fam, 1, coarse), Ring::Z, 1, {}, coarse);
    CHECK(a.cochain.values == b.cochain.values);
    CHECK(a.cochain.values == c.cochain.values);
    REQUIRE(a.cells.size() == c.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].signed_count == c.cells[i].signed_count);
  }
}

TEST_CASE("builtin names resolve") {
  for (const auto& name : toys::builtin_names())
    if (name.rfind("moebius-prod-", 0) != 0) CHECK_NOTHROW(validate_family(toys::builtin(name)));
  CHECK(testutil::error_kind([] { toys::builtin("nope"); }) == ErrorKind::InvalidInput);
}

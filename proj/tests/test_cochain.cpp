#include <doctest.h>

#include <random>

#include "famclass/cochain.hpp"
#include "test_util.hpp"

using namespace famclass;
using namespace famclass::cochain;

namespace {

int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

CellCochain random_cochain(ComplexPtr c, int degree, Ring ring, std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> v(-5, 5);
  std::vector<Int> values(c->count(degree));
  for (auto& x : values) x = v(rng);
  return make_cochain(std::move(c), degree, ring, std::move(values));
}

std::vector<ComplexPtr> sample_complexes() {
  std::vector<ComplexPtr> out;
  for (int n = 1; n <= 4; ++n) {
    out.push_back(build_torus(n));
    out.push_back(build_cube(n));
  }
  out.push_back(build_circle(5));
  return out;
}

}  // namespace

TEST_CASE("torus and cube cell counts") {
  for (int n = 1; n <= 4; ++n) {
    const auto t = build_torus(n);
    const auto c = build_cube(n);
    for (int k = 0; k <= n; ++k) {
      CHECK(t->count(k) == static_cast<std::size_t>(binomial(n, k)));
      CHECK(c->count(k) == static_cast<std::size_t>(binomial(n, k) * (1 << (n - k))));
    }
    CHECK(t->locate(std::string(static_cast<std::size_t>(n), '*')).first == n);
  }
  CHECK(build_circle(4)->count(1) == 4);
  CHECK(build_point()->count(0) == 1);
  CHECK(testutil::error_kind([] { build_torus(5); }) == ErrorKind::InvalidInput);
}

TEST_CASE("Betti numbers of tori are binomial, cubes are acyclic") {
  for (int n = 1; n <= 4; ++n) {
    for (Ring r : {Ring::Z, Ring::F2}) {
      const auto bt = betti_numbers(*build_torus(n), r);
      const auto bc = betti_numbers(*build_cube(n), r);
      for (int k = 0; k <= n; ++k) {
        CHECK(bt[static_cast<std::size_t>(k)] == binomial(n, k));
        CHECK(bc[static_cast<std::size_t>(k)] == (k == 0 ? 1 : 0));
      }
    }
  }
  CHECK(betti_numbers(*build_circle(7), Ring::Z) == std::vector<int>{1, 1});
}

TEST_CASE("property: coboundary squares to zero") {
  std::mt19937_64 rng(13);
  for (const auto& c : sample_complexes())
    for (int k = 0; k + 2 <= c->dim(); ++k)
      for (Ring r : {Ring::Z, Ring::F2})
        for (int trial = 0; trial < 500; ++trial) CHECK(coboundary(coboundary(random_cochain(c, k, r, rng))).is_zero());
}

TEST_CASE("coboundary and pairing examples") {
  const auto t1 = build_torus(1);
  const auto top = make_cochain(t1, 1, Ring::Z, {3});
  CHECK(is_cocycle(top));
  CHECK(pair_fundamental(top) == 3);
  CHECK(pair_fundamental(make_cochain(t1, 1, Ring::F2, {3})) == 1);

  const auto s = build_circle(3);
  const auto f = make_cochain(s, 0, Ring::Z, {1, 0, 0});
  const auto df = coboundary(f);
  CHECK(pair_fundamental(df) == 0);
  CHECK_FALSE(df.is_zero());

  const auto t2 = build_torus(2);
  const auto c = make_cochain(t2, 2, Ring::Z, {5});
  CHECK(c.at("**") == 5);
  CHECK(pair_fundamental(c) == 5);
  CHECK(testutil::error_kind([&] { c.at("0*"); }) == ErrorKind::InvalidInput);
  CHECK(testutil::error_kind([&] { pair_fundamental(make_cochain(t2, 1, Ring::Z, {1, 0})); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("cohomology classes on the circle") {
  const auto s = build_circle(4);
  const auto a = make_cochain(s, 1, Ring::Z, {1, 0, 0, 0});
  const auto b = make_cochain(s, 1, Ring::Z, {0, 0, 1, 0});
  const auto c = make_cochain(s, 1, Ring::Z, {1, 1, 0, 0});
  CHECK(cohomologous(a, b));
  CHECK_FALSE(cohomologous(a, c));
  CHECK(cohomologous(make_cochain(s, 1, Ring::F2, {1, 0, 0, 0}), make_cochain(s, 1, Ring::F2, {1, 1, 1, 0})));
  CHECK_FALSE(cohomologous(make_cochain(s, 1, Ring::F2, {1, 0, 0, 0}), make_cochain(s, 1, Ring::F2, {1, 1, 0, 0})));
}

TEST_CASE("property: cohomology is an equivalence relation and pairing is a class invariant") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 3; ++n) {
    const auto t = build_torus(n);
    for (Ring r : {Ring::Z, Ring::F2})
      for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_cochain(t, n, r, rng);
        const auto x = random_cochain(t, n - 1, r, rng);
        const auto y = random_cochain(t, n - 1, r, rng);
        const auto b = add(a, coboundary(x));
        const auto c = add(b, coboundary(y), -1);
        CHECK(cohomologous(a, a));
        CHECK(cohomologous(a, b));
        CHECK(cohomologous(b, a));
        CHECK(cohomologous(a, c));
        CHECK(pair_fundamental(a) == pair_fundamental(b));
        CHECK(pair_fundamental(a) == pair_fundamental(c));
      }
  }
}

TEST_CASE("property: Smith normal form factors random matrices") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> dims(1, 5);
  std::uniform_int_distribution<Int> entry(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix a(dims(rng), dims(rng));
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = entry(rng);
    const SmithForm s = smith_normal_form(a);
    CHECK(s.u * a * s.v == s.d);
    CHECK(std::abs(lattice::determinant(s.u).get_d()) == 1.0);
    CHECK(std::abs(lattice::determinant(s.v).get_d()) == 1.0);
    Int prev = 1;
    bool zero_seen = false;
    for (std::size_t r = 0; r < s.d.rows(); ++r)
      for (std::size_t c = 0; c < s.d.cols(); ++c) {
        if (r != c) {
          CHECK(s.d(r, c) == 0);
          continue;
        }
        const Int d = s.d(r, c);
        CHECK(d >= 0);
        if (d == 0) {
          zero_seen = true;
        } else {
          CHECK_FALSE(zero_seen);
          CHECK(d % prev == 0);
          prev = d;
        }
      }

    std::vector<Int> x(a.cols());
    for (auto& v : x) v = entry(rng);
    const auto b = a * x;
    const auto sol = solve_integer(a, b);
    REQUIRE(sol.has_value());
    CHECK(a * *sol == b);
  }
  CHECK_FALSE(solve_integer(IntMatrix::from_rows({{2, 0}, {0, 2}}), {1, 0}).has_value());
  CHECK(rank_f2(IntMatrix::from_rows({{2, 0}, {0, 1}})) == 1);
}

TEST_CASE("pullback under covering maps multiplies the pairing by the degree") {
  for (int k = 1; k <= 4; ++k) {
    const auto f = torus1_degree_map(k);
    const auto c = make_cochain(f.target, 1, Ring::Z, {3});
    CHECK(pair_fundamental(pullback(f, c)) == 3 * k);

    const auto g = circle_cover(3, k);
    const auto e = make_cochain(g.target, 1, Ring::Z, {1, 0, 2});
    CHECK(pair_fundamental(pullback(g, e)) == 3 * k);
    const auto e2 = make_cochain(g.target, 1, Ring::F2, {1, 0, 0});
    CHECK(pair_fundamental(pullback(g, e2)) == k % 2);
  }
  const auto t = build_torus(1);
  CHECK(testutil::error_kind([&] { check_chain_map({t, t, {IntMatrix(1, 1, 1), IntMatrix(1, 1, 1)}}); })
            .has_value() == false);
}

TEST_CASE("raw complexes are validated") {
  // Two vertices, one edge from v0 to v1: fine.
  std::vector<std::vector<Cell>> cells = {{{"v0", 0, {}}, {"v1", 0, {}}}, {{"e", 1, {}}}};
  CHECK_NOTHROW(CellComplex(cells, {IntMatrix(0, 2), IntMatrix::from_rows({{-1}, {1}})}));
  // A 2-cell whose boundary (e counted once) has nonzero boundary.
  std::vector<std::vector<Cell>> bad = {{{"v0", 0, {}}, {"v1", 0, {}}}, {{"e", 1, {}}}, {{"f", 2, {}}}};
  CHECK(testutil::error_kind([&] {
          CellComplex(bad, {IntMatrix(0, 2), IntMatrix::from_rows({{-1}, {1}}), IntMatrix::from_rows({{1}})});
        }) == ErrorKind::InvalidInput);
  std::vector<std::vector<Cell>> dup = {{{"v", 0, {}}, {"v", 0, {}}}};
  CHECK(testutil::error_kind([&] { CellComplex(dup, {IntMatrix(0, 2)}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("class from cell counts requires every cell") {
  const auto t = build_torus(2);
  const auto c = class_from_cell_counts(t, 2, {{"**", 4}}, Ring::F2);
  CHECK(c.values == std::vector<Int>{0});
  const auto d = class_from_cell_counts(t, 1, {{"*0", 1}, {"0*", 2}}, Ring::Z);
  CHECK(d.at("0*") == 2);
  CHECK(testutil::error_kind([&] { class_from_cell_counts(t, 1, {{"*0", 1}}, Ring::Z); }) == ErrorKind::InvalidInput);
  CHECK(testutil::error_kind([&] { class_from_cell_counts(t, 1, {{"*0", 1}, {"0*", 2}, {"zz", 1}}, Ring::Z); }) ==
        ErrorKind::InvalidInput);
}

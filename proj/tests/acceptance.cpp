// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "famclass/cochain.hpp"
#include "famclass/fourman.hpp"
#include "famclass/lattice.hpp"
#include "famclass/scenario.hpp"
#include "famclass/toy_families.hpp"
#include "famclass/vnengine.hpp"
#include "famclass/wallcross.hpp"

using namespace famclass;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && out_.ok) {
      out_.ok = false;
      out_.detail = what;
    }
  }
  Outcome done() const { return out_; }

 private:
  Outcome out_;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.ok && secs >= limit_s) o = {false, "time limit exceeded"};
  if (!o.ok) ++failures;
  std::ostringstream line;
  line.precision(3);
  line << (o.ok ? "PASS" : "FAIL") << "  " << id << ". " << title << "  (" << std::fixed << secs << " s, limit "
       << limit_s << " s)";
  if (!o.ok) line << "  " << o.detail;
  std::cout << line.str() << std::endl;
}

using Cplx = std::complex<double>;

vn::ToyFredholmFamily planar(const std::string& name, double radius, std::function<Cplx(Cplx)> f) {
  vn::ToyFredholmFamily fam;
  fam.name = name;
  fam.fiber_dim = 2;
  fam.target_dim = 2;
  fam.radius = radius;
  fam.section = [f](const vn::Vec&, const vn::Vec& x) {
    const Cplx w = f(Cplx(x[0], x[1]));
    vn::Vec s(2);
    s << w.real(), w.imag();
    return s;
  };
  return fam;
}

// Winding number of f along the boundary square of [-r, r]^2.
long winding_oracle(const std::function<Cplx(Cplx)>& f, double r) {
  const int steps = 4000;
  const Cplx corners[4] = {{-r, -r}, {r, -r}, {r, r}, {-r, r}};
  double total = 0.0;
  for (int side = 0; side < 4; ++side)
    for (int i = 0; i < steps; ++i) {
      const Cplx a = corners[side], b = corners[(side + 1) % 4];
      total += std::arg(f(a + (b - a) * (double(i + 1) / steps)) / f(a + (b - a) * (double(i) / steps)));
    }
  return std::lround(total / (2.0 * std::acos(-1.0)));
}

Outcome formal_dimensions() {
  Check c;
  fourman::FourManifold x = fourman::k3();
  for (int n = 1; n <= 8; ++n) {
    x = fourman::connected_sum(x, fourman::s2xs2());
    const auto d = fourman::formal_dim_sw(x, {lattice::LatticeVector(x.lattice.rank(), 0)});
    const int bp = lattice::inertia(x.lattice).b_plus;
    c.expect(d == -n, "d != -n at n = " + std::to_string(n));
    c.expect(bp == 3 + n && fourman::check_bplus_condition(x, n), "b+ condition at n = " + std::to_string(n));
  }
  return c.done();
}

Outcome lattice_invariants() {
  Check c;
  const auto k3 = fourman::k3();
  c.expect(lattice::inertia(k3.lattice) == lattice::Inertia{3, 19, -16}, "inertia(K3)");
  c.expect(lattice::parity(k3.lattice) == lattice::Parity::Even, "parity(K3)");
  fourman::FourManifold x = k3;
  for (int n = 1; n <= 4; ++n) {
    x = fourman::connected_sum(x, fourman::cp2_2cp2bar());
    c.expect(fourman::homeo_invariants_match(x, fourman::cp2_sum(n + 3, 2 * n + 19)).match,
             "homeo invariants at n = " + std::to_string(n));
  }
  return c.done();
}

Outcome wall_degree() {
  Check c;
  wall::DegreeOptions opts;
  opts.min_levels = 3;  // the final level plus two refinement doublings agree
  for (int n = 1; n <= 3; ++n) {
    const auto fam =
        wall::reflection_family(n, std::vector<lattice::IntMatrix>(static_cast<std::size_t>(n), wall::h_reflection()));
    std::optional<lattice::Int> first;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = wall::boundary_degree(fam, seed, opts);
      c.expect(r.degree == 1 || r.degree == -1, "degree not +-1 at n = " + std::to_string(n));
      c.expect(!first || *first == r.degree, "seed dependence at n = " + std::to_string(n));
      first = r.degree;
      bool stable = r.trace.size() >= 3;
      for (std::size_t i = r.trace.size() >= 3 ? r.trace.size() - 3 : 0; i < r.trace.size(); ++i)
        stable = stable && r.trace[i].degree == r.degree;
      c.expect(stable, "not stable across two doublings at n = " + std::to_string(n));
    }
  }
  return c.done();
}

Outcome k3_scenario() {
  Check c;
  for (int n = 1; n <= 3; ++n) {
    const auto v = scenario::run_scenario("k3-sum", {{"n", n}});
    const std::string tag = " at n = " + std::to_string(n);
    c.expect(v.pairing == 1, "pairing" + tag);
    c.expect(v.cls && v.cls->ring == Ring::F2 && v.cls->degree == n, "class over F2 in degree n" + tag);
    c.expect(v.cls && v.cls->complex->dim() == n && !cochain::cohomologous(*v.cls, cochain::zero_cochain(v.cls->complex, n, Ring::F2)),
             "class is not the generator of H^n(T^n; F2)" + tag);
    c.expect(v.generator.value_or(false), "generator flag" + tag);
    bool gluing = false;
    for (const auto& a : v.assumptions) gluing = gluing || a.name.find("gluing") != std::string::npos;
    c.expect(gluing, "assumption ledger does not cite the gluing formula" + tag);
  }
  return c.done();
}

Outcome composition() {
  Check c;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<lattice::Int> mid(-1000, 1000);
  for (int e = 1; e <= 4; ++e) {
    const int n = 1 << e;
    for (int trial = 0; trial < 100; ++trial) {
      wall::CompositionTable t;
      t.n = n;
      t.values[0] = 2;
      t.values[n] = 1;
      for (int k = 1; k < n; ++k) t.values[k] = mid(rng);
      c.expect(wall::composition_sum(t).value == 1, "n = " + std::to_string(n) + " did not return 1");
    }
  }
  bool changed = false;
  for (int trial = 0; trial < 100 && !changed; ++trial) {
    wall::CompositionTable t;
    t.n = 3;
    t.values = {{0, 2}, {1, mid(rng)}, {2, mid(rng)}, {3, 1}};
    changed = wall::composition_sum(t).value != 1;
  }
  c.expect(changed, "n = 3: no middle assignment changed the result");
  return c.done();
}

Outcome vn_well_defined() {
  Check c;
  for (const auto& name : vn::toys::builtin_names()) {
    if (name.rfind("moebius-prod-", 0) == 0 && name != "moebius-prod-2") continue;
    const auto fam = vn::toys::builtin(name);
    const Ring ring = fam.orientable() ? Ring::Z : Ring::F2;
    std::optional<std::vector<lattice::Int>> ref;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto phi = vn::build_perturbation(fam, seed * 7919);
      for (int extra = 0; extra <= 3; ++extra) {
        const auto values = vn::family_class(fam, vn::suspend(phi, extra), ring, seed).cochain.values;
        if (!ref) ref = values;
        c.expect(values == *ref, name + ": counts depend on the perturbation");
      }
    }
  }
  struct Case {
    std::string name;
    double r;
    std::function<Cplx(Cplx)> f;
  };
  const std::vector<Case> cases = {{"z^2", 2.0, [](Cplx z) { return z * z; }},
                                   {"z^3", 2.0, [](Cplx z) { return z * z * z; }},
                                   {"conj", 1.0, [](Cplx z) { return std::conj(z); }},
                                   {"z^2 - 1/4", 2.0, [](Cplx z) { return z * z - 0.25; }},
                                   {"z^3 - z", 2.0, [](Cplx z) { return z * z * z - z; }}};
  for (const auto& k : cases) {
    const auto fam = planar(k.name, k.r, k.f);
    const long w = winding_oracle(k.f, k.r);
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      c.expect(vn::count_point(fam, vn::build_perturbation(fam, seed), Ring::Z, seed).value == w,
               k.name + ": count differs from the winding number");
  }
  return c.done();
}

Outcome twisted_parity() {
  Check c;
  const auto gen = vn::family_class(vn::toys::moebius(), vn::build_perturbation(vn::toys::moebius(), 1), Ring::F2, 1);
  const auto t1 = gen.cochain.complex;
  c.expect(cochain::pair_fundamental(gen.cochain) == 1, "Moebius pairing");
  c.expect(!cochain::cohomologous(gen.cochain, cochain::zero_cochain(t1, 1, Ring::F2)), "Moebius class is zero");
  const auto triv =
      vn::family_class(vn::toys::untwisted(), vn::build_perturbation(vn::toys::untwisted(), 1), Ring::F2, 1);
  c.expect(cochain::cohomologous(triv.cochain, cochain::zero_cochain(triv.cochain.complex, 1, Ring::F2)),
           "untwisted class is nonzero");
  return c.done();
}

Outcome cochain_engine() {
  Check c;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<lattice::Int> v(-9, 9);
  std::vector<cochain::ComplexPtr> complexes;
  for (int n = 1; n <= 4; ++n) {
    complexes.push_back(cochain::build_torus(n));
    complexes.push_back(cochain::build_cube(n));
  }
  for (const auto& cx : complexes)
    for (int k = 0; k + 2 <= cx->dim(); ++k)
      for (Ring ring : {Ring::Z, Ring::F2})
        for (int trial = 0; trial < 500; ++trial) {
          std::vector<lattice::Int> values(cx->count(k));
          for (auto& x : values) x = v(rng);
          const auto a = cochain::make_cochain(cx, k, ring, values);
          c.expect(cochain::coboundary(cochain::coboundary(a)).is_zero(), "dd != 0 on " + cx->name());
        }
  for (int n = 1; n <= 3; ++n)
    for (Ring ring : {Ring::Z, Ring::F2}) {
      const auto b = cochain::betti_numbers(*cochain::build_torus(n), ring);
      for (int k = 0; k <= n; ++k) {
        int binom = 1;
        for (int i = 1; i <= k; ++i) binom = binom * (n - k + i) / i;
        c.expect(b[static_cast<std::size_t>(k)] == binom, "Betti number of T^" + std::to_string(n));
      }
    }
  const auto t1 = cochain::build_torus(1);
  for (Ring ring : {Ring::Z, Ring::F2})
    c.expect(!cochain::cohomologous(cochain::make_cochain(t1, 1, ring, {1}), cochain::zero_cochain(t1, 1, ring)),
             "T^1 generator reported as zero");
  return c.done();
}

Outcome ruberman() {
  Check c;
  const auto v = scenario::run_scenario("ruberman-asd", {{"q", 1}});
  c.expect(v.cls && v.cls->ring == Ring::Z && v.cls->degree == 1 && v.cls->complex->dim() == 1, "class not in H^1(T^1; Z)");
  c.expect(v.pairing == -4, "value " + std::to_string(v.pairing) + " != -4");
  c.expect(v.nonvanishing, "class vanishes");
  return c.done();
}

}  // namespace

int main() {
  criterion(1, "SW formal dimension of K3 # n(S2xS2) is -n, b+ >= n+2 (n = 1..8)", 1.0, formal_dimensions);
  criterion(2, "K3 lattice invariants; dissolving homeomorphism invariants (n = 1..4)", 1.0, lattice_invariants);
  criterion(3, "reflection wall degree is +-1 and stable (n = 1..3, 10 seeds)", 30.0, wall_degree);
  criterion(4, "k3-sum scenario gives the generator of H^n(T^n; F2) (n = 1..3)", 10.0, k3_scenario);
  criterion(5, "composition sums at n = 2^N ignore the middle values; n = 3 does not", 5.0, composition);
  criterion(6, "toy counts independent of perturbation and suspension; winding oracle", 60.0, vn_well_defined);
  criterion(7, "Moebius family gives the T^1 generator over F2; untwisted gives 0", 10.0, twisted_parity);
  criterion(8, "cochain engine: dd = 0, Betti numbers of tori, T^1 generator", 10.0, cochain_engine);
  criterion(9, "ruberman-asd with q = 1 gives -4 in H^1(T^1; Z)", 1.0, ruberman);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

#include "famclass/fourman.hpp"

#include "famclass/error.hpp"

namespace famclass::fourman {

namespace {

using lattice::inertia;

LatticeVector concat(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool w2_nonzero(const SO3& p) {
  for (int w : p.w2)
    if (w % 2 != 0) return true;
  return false;
}

LatticeVector w2_lift(const SO3& p) {
  LatticeVector v(p.w2.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = ((p.w2[i] % 2) + 2) % 2;
  return v;
}

}  // namespace

FourManifold k3() {
  return {"K3", 0,
          lattice::build_lattice({lattice::hyperbolic(), lattice::hyperbolic(), lattice::hyperbolic(),
                                  lattice::e8(-1), lattice::e8(-1)})};
}

FourManifold s2xs2() { return {"S2xS2", 0, lattice::build_lattice({lattice::hyperbolic()})}; }

FourManifold cp2() { return {"CP2", 0, lattice::build_lattice({lattice::diagonal({1})})}; }

FourManifold cp2bar() { return {"-CP2", 0, lattice::build_lattice({lattice::diagonal({-1})})}; }

FourManifold cp2_2cp2bar() { return {"CP2#2(-CP2)", 0, lattice::build_lattice({lattice::diagonal({1, -1, -1})})}; }

FourManifold cp2_sum(int a, int b) {
  require(a >= 0 && b >= 0 && a + b > 0, ErrorKind::InvalidInput, "cp2_sum needs a nonempty sum");
  std::vector<Int> entries(static_cast<std::size_t>(a), 1);
  entries.insert(entries.end(), static_cast<std::size_t>(b), -1);
  return {std::to_string(a) + "CP2#" + std::to_string(b) + "(-CP2)", 0,
          lattice::build_lattice({lattice::diagonal(std::move(entries))})};
}

int euler_char(const FourManifold& x) { return 2 - 2 * x.b1 + static_cast<int>(x.lattice.rank()); }

Int formal_dim_sw(const FourManifold& x, const SpinC& s) {
  require(s.c1.size() == x.lattice.rank(), ErrorKind::InvalidInput,
          "c1 length does not match lattice rank of " + x.name);
  require(lattice::is_characteristic(x.lattice, s.c1), ErrorKind::Hypothesis,
          "c1 is not characteristic on " + x.name);
  const Int numerator = x.lattice.square(s.c1) - 2 * euler_char(x) - 3 * inertia(x.lattice).signature;
  if (numerator % 4 != 0) fail(ErrorKind::Internal, "c1^2 - 2chi - 3sign not divisible by 4 for characteristic c1");
  return numerator / 4;
}

Int formal_dim_asd(const FourManifold& x, const SO3& p) {
  require(p.w2.size() == x.lattice.rank(), ErrorKind::InvalidInput,
          "w2 length does not match lattice rank of " + x.name);
  require(w2_nonzero(p), ErrorKind::Hypothesis, "ASD setting requires nonzero w2");
  return -2 * p.p1 - 3 * (1 - x.b1 + inertia(x.lattice).b_plus);
}

std::string check_so3_consistency(const FourManifold& x, const SO3& p, bool strict) {
  require(p.w2.size() == x.lattice.rank(), ErrorKind::InvalidInput,
          "w2 length does not match lattice rank of " + x.name);
  const Int w2sq = x.lattice.square(w2_lift(p));
  if (((p.p1 - w2sq) % 4 + 4) % 4 == 0) return {};
  std::string msg = "p1 = " + std::to_string(p.p1) + " is not congruent to w2^2 = " + std::to_string(w2sq) +
                    " mod 4 on " + x.name;
  if (strict) fail(ErrorKind::Hypothesis, msg);
  return msg;
}

FourManifold connected_sum(const FourManifold& x1, const FourManifold& x2) {
  return {x1.name + "#" + x2.name, x1.b1 + x2.b1, lattice::direct_sum(x1.lattice, x2.lattice)};
}

ConnectedSum connected_sum(const FourManifold& x1, const FourManifold& x2, const AuxClass& a1, const AuxClass& a2) {
  require(a1.index() == a2.index(), ErrorKind::InvalidInput, "connected sum of mixed class kinds");
  FourManifold x = connected_sum(x1, x2);
  if (const auto* s1 = std::get_if<SpinC>(&a1)) {
    const auto& s2 = std::get<SpinC>(a2);
    return {std::move(x), SpinC{concat(s1->c1, s2.c1)}};
  }
  const auto& p1 = std::get<SO3>(a1);
  const auto& p2 = std::get<SO3>(a2);
  SO3 p{p1.p1 + p2.p1, p1.w2};
  p.w2.insert(p.w2.end(), p2.w2.begin(), p2.w2.end());
  return {std::move(x), std::move(p)};
}

MembershipReport group_membership(const FourManifold& x, const AuxClass& aux, const LatticeMap& m, int h1_sign) {
  require(lattice::is_isometry(x.lattice, m), ErrorKind::Hypothesis,
          "group_membership: map does not preserve the intersection form of " + x.name);
  require(h1_sign == 1 || h1_sign == -1, ErrorKind::InvalidInput, "h1_sign must be +1 or -1");
  MembershipReport r;
  if (const auto* s = std::get_if<SpinC>(&aux)) {
    require(s->c1.size() == x.lattice.rank(), ErrorKind::InvalidInput, "c1 length does not match rank");
    r.preserves_class = (m.matrix * s->c1) == s->c1;
  } else {
    const auto& p = std::get<SO3>(aux);
    require(p.w2.size() == x.lattice.rank(), ErrorKind::InvalidInput, "w2 length does not match rank");
    const LatticeVector w = w2_lift(p);
    const LatticeVector image = m.matrix * w;
    r.preserves_class = true;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (((image[i] - w[i]) % 2) != 0) r.preserves_class = false;
  }
  int sign = lattice::positive_orientation_sign(x.lattice, m);
  if (x.b1 > 0) sign *= h1_sign;
  r.preserves_homology_orientation = sign > 0;
  r.coefficient_ring = r.preserves_homology_orientation ? Ring::Z : Ring::F2;
  return r;
}

HomeoComparison homeo_invariants_match(const FourManifold& x, const FourManifold& y) {
  HomeoComparison c;
  const auto ix = inertia(x.lattice);
  const auto iy = inertia(y.lattice);
  auto note = [&c](const std::string& what, long a, long b) {
    if (a != b) c.differences.push_back(what + ": " + std::to_string(a) + " vs " + std::to_string(b));
  };
  note("b1", x.b1, y.b1);
  note("b+", ix.b_plus, iy.b_plus);
  note("b-", ix.b_minus, iy.b_minus);
  const auto px = lattice::parity(x.lattice);
  const auto py = lattice::parity(y.lattice);
  if (px != py) c.differences.push_back("parity: " + to_string(px) + " vs " + to_string(py));
  c.match = c.differences.empty();
  return c;
}

bool check_bplus_condition(const FourManifold& x, int n) {
  require(n >= 0, ErrorKind::InvalidInput, "n must be nonnegative");
  return inertia(x.lattice).b_plus >= n + 2;
}

}  // namespace famclass::fourman

#include "famclass/toy_families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "famclass/error.hpp"

namespace famclass::vn::toys {

namespace {

using std::numbers::pi;

ToyFredholmFamily line(std::string name, double radius, std::function<double(double)> f) {
  ToyFredholmFamily fam;
  fam.name = std::move(name);
  fam.radius = radius;
  fam.section = [f](const Vec&, const Vec& x) { return Vec::Constant(1, f(x[0])); };
  return fam;
}

double smoothstep(double x) {
  const double u = std::clamp((x + 1.0) / 2.0, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace

ToyFredholmFamily line_identity() {
  return line("line-identity", 1.0, [](double x) { return x; });
}

ToyFredholmFamily line_cubic() {
  return line("line-cubic", 2.0, [](double x) { return x * x * x - x; });
}

ToyFredholmFamily line_square() {
  return line("line-square", 1.0, [](double x) { return x * x; });
}

ToyFredholmFamily line_positive() {
  return line("line-positive", 1.0, [](double x) { return x * x + 1.0; });
}

ToyFredholmFamily planar_z2() {
  ToyFredholmFamily fam;
  fam.name = "planar-z2";
  fam.fiber_dim = 2;
  fam.target_dim = 2;
  fam.radius = 2.0;
  fam.section = [](const Vec&, const Vec& x) {
    Vec s(2);
    s << x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1];
    return s;
  };
  return fam;
}

ToyFredholmFamily moebius() { return moebius_product(1); }

ToyFredholmFamily untwisted() {
  ToyFredholmFamily fam;
  fam.name = "untwisted-1";
  fam.base = BaseKind::Torus;
  fam.base_dim = 1;
  fam.fiber_dim = 1;
  fam.target_dim = 2;
  fam.radius = 1.0;
  fam.section = [](const Vec&, const Vec& x) {
    Vec s(2);
    s << x[0], 1.0;
    return s;
  };
  return fam;
}

ToyFredholmFamily moebius_product(int n) {
  require(n >= 1 && n <= 4, ErrorKind::InvalidInput, "moebius product needs 1 <= n <= 4");
  ToyFredholmFamily fam;
  fam.name = n == 1 ? "moebius-1" : "moebius-prod-" + std::to_string(n);
  fam.base = BaseKind::Torus;
  fam.base_dim = n;
  fam.fiber_dim = n;
  fam.target_dim = 2 * n;
  fam.radius = 1.0;
  fam.section = [n](const Vec& b, const Vec& x) {
    Vec s(2 * n);
    for (int i = 0; i < n; ++i) {
      s[2 * i] = x[i];
      s[2 * i + 1] = std::cos(pi * b[i]);
    }
    return s;
  };
  for (int i = 0; i < n; ++i) {
    Transition t{Mat::Identity(n, n), Mat::Identity(2 * n, 2 * n)};
    t.fiber(i, i) = -1.0;
    t.target(2 * i, 2 * i) = -1.0;
    t.target(2 * i + 1, 2 * i + 1) = -1.0;
    fam.monodromy.push_back(std::move(t));
  }
  return fam;
}

ToyFredholmFamily winding() {
  ToyFredholmFamily fam;
  fam.name = "winding-1";
  fam.base = BaseKind::Torus;
  fam.base_dim = 1;
  fam.fiber_dim = 1;
  fam.target_dim = 2;
  fam.radius = 2.0;
  fam.section = [](const Vec& b, const Vec& x) {
    const double p = smoothstep(x[0]);
    Vec s(2);
    s << p * std::cos(2.0 * pi * b[0]) + 2.0 * (1.0 - p), p * std::sin(2.0 * pi * b[0]);
    return s;
  };
  return fam;
}

ToyFredholmFamily builtin(const std::string& name) {
  if (name == "line-identity") return line_identity();
  if (name == "line-cubic") return line_cubic();
  if (name == "line-square") return line_square();
  if (name == "line-positive") return line_positive();
  if (name == "planar-z2") return planar_z2();
  if (name == "moebius-1") return moebius();
  if (name == "untwisted-1") return untwisted();
  if (name == "winding-1") return winding();
  const std::string prefix = "moebius-prod-";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() &&
      name.find_first_not_of("0123456789", prefix.size()) == std::string::npos)
    return moebius_product(std::stoi(name.substr(prefix.size())));
  fail(ErrorKind::InvalidInput, "unknown built-in family " + name);
}

std::vector<std::string> builtin_names() {
  return {"line-identity", "line-cubic", "line-square", "line-positive", "planar-z2",
          "moebius-1",     "untwisted-1", "winding-1",  "moebius-prod-2"};
}

}  // namespace famclass::vn::toys

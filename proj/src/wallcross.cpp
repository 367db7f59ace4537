#include "famclass/wallcross.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "famclass/error.hpp"

namespace famclass::wall {

namespace {

std::string fmt(const RVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Solves Y c = d exactly for square Y (columns y_j). Returns the determinant sign
// (0 if singular) and c when nonsingular; `d_in_span` tells whether d lies in the
// column span in the singular case.
struct ConeSolve {
  int det_sign = 0;
  RVec c;
  bool d_in_span = false;
};

ConeSolve solve_cone(const std::vector<RVec>& cols, const RVec& d) {
  const std::size_t n = d.size();
  std::vector<RVec> a(n, RVec(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = cols[c][r];
    a[r][n] = d[r];
  }
  ConeSolve out;
  int sign = 1;
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < n && row < n; ++c) {
    std::size_t p = row;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) continue;
    if (p != row) {
      std::swap(a[p], a[row]);
      sign = -sign;
    }
    if (a[row][c] < 0) sign = -sign;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[row][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  if (row < n) {
    out.d_in_span = true;
    for (std::size_t r = row; r < n; ++r)
      if (a[r][n] != 0) out.d_in_span = false;
    return out;
  }
  out.det_sign = sign;
  out.c.resize(n);
  for (std::size_t r = 0; r < n; ++r) out.c[r] = a[r][n] / a[r][r];
  return out;
}

int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j] ? 1 : 0;
  return inv % 2 == 0 ? 1 : -1;
}

RVec draw_ray(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<long> u(-1'000'000, 1'000'000);
  RVec d(static_cast<std::size_t>(n));
  bool nonzero = false;
  while (!nonzero) {
    for (auto& x : d) {
      x = Rational(u(rng), 1'000'000);
      x.canonicalize();
      nonzero = nonzero || x != 0;
    }
  }
  return d;
}

class DegreeCounter {
 public:
  explicit DegreeCounter(const WallFamily& fam) : fam_(fam) {
    require(fam.n >= 1 && fam.n <= 4, ErrorKind::InvalidInput, "wall family dimension must be in 1..4");
    require(static_cast<int>(fam.gammas.size()) == fam.n, ErrorKind::InvalidInput, "one gamma per parameter expected");
    require(static_cast<bool>(fam.sigma), ErrorKind::InvalidInput, "wall family has no sigma");
    const IntMatrix& g = fam.lattice.gram();
    for (const auto& gamma : fam.gammas) {
      require(gamma.size() == fam.lattice.rank(), ErrorKind::InvalidInput, "gamma length does not match lattice rank");
      const auto v = g * gamma;
      gram_gammas_.emplace_back(v.begin(), v.end());
    }
  }

  // Degree at subdivision m along ray d; nullopt if the ray must be redrawn.
  std::optional<Int> degree(int m, const RVec& d, std::size_t& simplices) {
    const int n = fam_.n;
    Int total = 0;
    simplices = 0;
    for (int axis = 0; axis < n; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const int normal = side ? 1 : -1;
        std::vector<int> free;
        for (int a = 0; a < n; ++a)
          if (a != axis) free.push_back(a);
        std::vector<int> corner(static_cast<std::size_t>(n), 0);
        corner[static_cast<std::size_t>(axis)] = side * m;
        std::vector<int> digit(free.size(), 0);
        for (;;) {
          for (std::size_t f = 0; f < free.size(); ++f) corner[static_cast<std::size_t>(free[f])] = digit[f];
          std::vector<int> perm = free;
          do {
            std::vector<int> order{axis};
            order.insert(order.end(), perm.begin(), perm.end());
            const int orientation = normal * permutation_sign(order);
            std::vector<RVec> cols;
            std::vector<int> v = corner;
            cols.push_back(value(v, m));
            for (int a : perm) {
              ++v[static_cast<std::size_t>(a)];
              cols.push_back(value(v, m));
            }
            ++simplices;
            const ConeSolve s = solve_cone(cols, d);
            if (s.det_sign == 0) {
              if (s.d_in_span) return std::nullopt;
              continue;
            }
            bool positive = true;
            for (const auto& c : s.c) {
              if (c == 0) return std::nullopt;
              positive = positive && c > 0;
            }
            if (positive) total += s.det_sign * orientation;
          } while (std::next_permutation(perm.begin(), perm.end()));
          std::size_t f = 0;
          while (f < digit.size() && ++digit[f] == m) digit[f++] = 0;
          if (f == digit.size()) break;
        }
      }
    }
    return total;
  }

 private:
  RVec value(const std::vector<int>& grid, int m) {
    // Key by the reduced dyadic point so refinements share work.
    RVec t(grid.size());
    for (std::size_t a = 0; a < grid.size(); ++a) {
      t[a] = Rational(grid[a], m);
      t[a].canonicalize();
    }
    std::string key;
    for (const auto& x : t) key += x.get_str() + ",";
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const RVec y = psi_of(t);
    bool zero = std::all_of(y.begin(), y.end(), [](const Rational& q) { return q == 0; });
    if (zero) fail(ErrorKind::Hypothesis, "section meets wall on boundary at t = " + fmt(t));
    cache_.emplace(key, y);
    return y;
  }

  RVec psi_of(const RVec& t) const {
    const RVec s = fam_.sigma(t);
    require(s.size() == fam_.lattice.rank(), ErrorKind::InvalidInput, "sigma returned a vector of the wrong length");
    RVec out(gram_gammas_.size());
    for (std::size_t i = 0; i < gram_gammas_.size(); ++i) {
      Rational acc = 0;
      for (std::size_t r = 0; r < s.size(); ++r) acc += s[r] * gram_gammas_[i][r];
      out[i] = acc;
    }
    return out;
  }

  const WallFamily& fam_;
  std::vector<std::vector<Int>> gram_gammas_;
  std::map<std::string, RVec> cache_;
};

RVec axpy(const Rational& a, const RVec& x, const Rational& b, const RVec& y) {
  RVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

RVec act(const IntMatrix& m, const RVec& v) {
  RVec out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Rational acc = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

Rational pair_h(const RVec& a, const RVec& b) { return a[0] * b[1] + a[1] * b[0]; }

// Per-summand data of the exact-limit classes.
struct Summand {
  RVec mu0;      // mu_i^0, taken to be gamma
  RVec nu;       // -f* mu0: endpoint of the metric path in the same positive cone
  RVec f_mu0;    // f* mu0

  RVec mu(const Rational& tau) const { return axpy(1 - tau, mu0, tau, nu); }

  // beta_i as a function of t_i alone.
  RVec beta(const Rational& t) const {
    const Rational half(1, 2);
    Rational s = std::min(Rational(2 * t), Rational(1));
    if (t <= half) return mu(s);
    return axpy(2 - 2 * t, mu(s), 2 * t - 1, f_mu0);
  }
};

}  // namespace

RVec psi(const WallFamily& fam, const RVec& t) {
  require(static_cast<int>(t.size()) == fam.n, ErrorKind::InvalidInput, "parameter has the wrong length");
  for (const auto& ti : t) require(ti >= 0 && ti <= 1, ErrorKind::InvalidInput, "parameter outside [0,1]");
  const RVec s = fam.sigma(t);
  require(s.size() == fam.lattice.rank(), ErrorKind::InvalidInput, "sigma returned a vector of the wrong length");
  const IntMatrix& g = fam.lattice.gram();
  RVec out;
  for (const auto& gamma : fam.gammas) {
    const auto gg = g * gamma;
    Rational acc = 0;
    for (std::size_t r = 0; r < s.size(); ++r) acc += s[r] * gg[r];
    out.push_back(acc);
  }
  return out;
}

std::function<RVec(const RVec&)> exact_sigma(std::function<std::vector<double>(const std::vector<double>&)> f) {
  return [f](const RVec& t) {
    std::vector<double> td;
    for (const auto& x : t) td.push_back(x.get_d());
    const auto v = f(td);
    RVec out;
    for (double x : v) {
      require(std::isfinite(x), ErrorKind::InvalidInput, "sigma produced a non-finite value");
      out.emplace_back(x);
    }
    return out;
  };
}

RVec f_rs(const RVec& t) {
  RVec out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(t[i] >= 0 && t[i] <= 1, ErrorKind::InvalidInput, "parameter outside [0,1]");
    out[i] = std::min(Rational(2 * t[i]), Rational(1));
  }
  return out;
}

DegreeResult boundary_degree(const WallFamily& fam, std::uint64_t seed, const DegreeOptions& opts) {
  DegreeCounter counter(fam);
  std::mt19937_64 rng(seed);
  DegreeResult result;
  result.seed = seed;
  for (int m = opts.initial_subdivision;; m *= 2) {
    if (m > opts.max_subdivision) {
      std::string t;
      for (const auto& l : result.trace) t += " [m=" + std::to_string(l.subdivision) + ": " + std::to_string(l.degree) + "]";
      fail(ErrorKind::NonStabilization, "boundary degree did not stabilize up to subdivision " +
                                            std::to_string(opts.max_subdivision) + ";" + t);
    }
    std::optional<Int> deg;
    std::size_t simplices = 0;
    for (int draw = 0; !deg; ++draw) {
      require(draw < opts.max_ray_draws, ErrorKind::NonStabilization, "no generic ray found for the boundary degree");
      ++result.ray_draws;
      deg = counter.degree(m, draw_ray(rng, fam.n), simplices);
    }
    result.trace.push_back(DegreeLevel{m, *deg, simplices});
    const auto k = static_cast<int>(result.trace.size());
    if (k >= opts.min_levels) {
      bool agree = true;
      for (int i = k - opts.min_levels; i < k; ++i) agree = agree && result.trace[static_cast<std::size_t>(i)].degree == *deg;
      if (agree) {
        result.degree = *deg;
        return result;
      }
    }
  }
}

double BoundLedger::constant(const std::string& name) const {
  auto it = constants.find(name);
  require(it != constants.end(), ErrorKind::InvalidInput, "ledger constant " + name + " missing");
  require(it->second > 0, ErrorKind::InvalidInput, "ledger constant " + name + " must be positive");
  return it->second;
}

double BoundLedger::min_T() const {
  require(!Ti.empty(), ErrorKind::InvalidInput, "ledger needs neck lengths T_i");
  return *std::min_element(Ti.begin(), Ti.end());
}

void check_ledger(const BoundLedger& l) {
  require(!l.Ti.empty(), ErrorKind::InvalidInput, "ledger needs neck lengths T_i");
  require(l.baselines.size() == l.Ti.size(), ErrorKind::InvalidInput, "one baseline pairing per T_i expected");
  const double c1 = l.constant("C1");
  for (std::size_t i = 0; i < l.Ti.size(); ++i) {
    require(l.Ti[i] > c1, ErrorKind::Hypothesis, "T_" + std::to_string(i + 1) + " = " + fmt(l.Ti[i]) + " must exceed C1");
    require(l.T >= l.Ti[i], ErrorKind::Hypothesis, "T must be at least T_" + std::to_string(i + 1));
    for (std::size_t j = 0; j < l.Ti.size(); ++j)
      if (i != j)
        require(4 * l.T >= 3 * (l.Ti[i] + l.Ti[j]), ErrorKind::Hypothesis,
                "4T >= 3(T_" + std::to_string(i + 1) + " + T_" + std::to_string(j + 1) + ") violated");
  }
}

std::string to_string(Face f) { return f == Face::Zero ? "F0" : "F1"; }

FaceCertificate ledger_certificate(const BoundLedger& ledger, Face face, int axis) {
  check_ledger(ledger);
  require(axis >= 0 && axis < static_cast<int>(ledger.Ti.size()), ErrorKind::InvalidInput, "face axis out of range");
  FaceCertificate c;
  c.axis = axis;
  c.face = face;
  const double b = ledger.baselines[static_cast<std::size_t>(axis)].get_d();
  const double k = ledger.constant(face == Face::Zero ? "C17" : "C18");
  c.center = face == Face::Zero ? b : -b;
  c.radius = k / ledger.min_T();
  c.lo = c.center - c.radius;
  c.hi = c.center + c.radius;
  c.certified = c.lo > 0 || c.hi < 0;
  c.required_min_T = b == 0 ? std::numeric_limits<double>::infinity() : k / std::abs(b);
  return c;
}

LedgerConclusion face_sign_conclusion(const BoundLedger& ledger) {
  LedgerConclusion out;
  out.opposite_signs = true;
  std::string uncertified;
  for (int i = 0; i < static_cast<int>(ledger.Ti.size()); ++i) {
    const auto f0 = ledger_certificate(ledger, Face::Zero, i);
    const auto f1 = ledger_certificate(ledger, Face::One, i);
    for (const auto& f : {f0, f1}) {
      out.required_min_T = std::max(out.required_min_T, f.required_min_T);
      if (!f.certified) uncertified += " " + to_string(f.face) + "_" + std::to_string(i + 1);
    }
    const bool opposite = f0.certified && f1.certified && ((f0.lo > 0) != (f1.lo > 0));
    out.opposite_signs = out.opposite_signs && opposite;
    out.faces.push_back(f0);
    out.faces.push_back(f1);
  }
  if (out.opposite_signs)
    out.statement = "pairings on opposite faces have opposite signs; boundary degree is +-1";
  else
    out.statement = "faces not certified:" + uncertified + "; increase T (need min T_i > " + fmt(out.required_min_T) + ")";
  return out;
}

IntMatrix h_reflection() { return IntMatrix::from_rows({{-1, 0}, {0, -1}}); }

WallFamily reflection_family(int n, const std::vector<IntMatrix>& f_star, const std::optional<BoundLedger>& ledger) {
  require(n >= 1 && n <= 4, ErrorKind::InvalidInput, "reflection family needs 1 <= n <= 4");
  require(static_cast<int>(f_star.size()) == n, ErrorKind::InvalidInput, "one f* block per summand expected");
  const IntMatrix h = lattice::build_lattice({lattice::hyperbolic()}).gram();
  const LatticeVector gamma{1, 1};
  std::vector<Summand> summands;
  for (int i = 0; i < n; ++i) {
    const IntMatrix& f = f_star[static_cast<std::size_t>(i)];
    const std::string tag = "f*_" + std::to_string(i + 1);
    require(f.rows() == 2 && f.cols() == 2, ErrorKind::InvalidInput, tag + " must be a 2x2 block");
    require(f.transpose() * h * f == h, ErrorKind::Hypothesis, tag + " is not an isometry of H");
    const auto fg = f * gamma;
    require(fg == LatticeVector{-1, -1}, ErrorKind::Hypothesis, tag + " does not send gamma to -gamma");
    Summand s;
    s.mu0 = {Rational(1), Rational(1)};
    s.f_mu0 = act(f, s.mu0);
    s.nu = {-s.f_mu0[0], -s.f_mu0[1]};
    const Rational a = pair_h(s.mu0, s.mu0);
    const Rational b = pair_h(s.mu0, s.nu);
    require(a > 0 && (b >= 0 || (a + b) / 2 > 0), ErrorKind::Hypothesis,
            tag + ": metric path leaves the positive cone");
    summands.push_back(std::move(s));
  }

  WallFamily fam;
  fam.n = n;
  fam.lattice = lattice::repeat(lattice::build_lattice({lattice::hyperbolic()}), n);
  for (int i = 0; i < n; ++i) {
    LatticeVector g(static_cast<std::size_t>(2 * n), 0);
    g[static_cast<std::size_t>(2 * i)] = 1;
    g[static_cast<std::size_t>(2 * i + 1)] = 1;
    fam.gammas.push_back(std::move(g));
  }

  if (!ledger) {
    fam.description = "reflection family, exact limit";
    fam.sigma = [summands, n](const RVec& t) {
      require(static_cast<int>(t.size()) == n, ErrorKind::InvalidInput, "parameter has the wrong length");
      RVec out(static_cast<std::size_t>(2 * n));
      for (int i = 0; i < n; ++i) {
        const RVec b = summands[static_cast<std::size_t>(i)].beta(t[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(2 * i)] = b[0];
        out[static_cast<std::size_t>(2 * i + 1)] = b[1];
      }
      return out;
    };
    return fam;
  }

  require(static_cast<int>(ledger->Ti.size()) == n, ErrorKind::InvalidInput, "ledger needs one T_i per summand");
  const LedgerConclusion verdict = face_sign_conclusion(*ledger);
  require(verdict.opposite_signs, ErrorKind::Hypothesis, verdict.statement);
  // Each summand is scaled so that its face pairings are +-baseline, then a
  // bounded error term of size below min(C17, C18) / min T is added.
  const Rational radius(std::min(ledger->constant("C17"), ledger->constant("C18")) / ledger->min_T());
  std::vector<Rational> scale;
  for (int i = 0; i < n; ++i) {
    const auto& s = summands[static_cast<std::size_t>(i)];
    scale.push_back(ledger->baselines[static_cast<std::size_t>(i)] / pair_h(s.mu0, {Rational(1), Rational(1)}));
  }
  fam.description = "reflection family, ledger mode";
  fam.sigma = [summands, scale, radius, n](const RVec& t) {
    require(static_cast<int>(t.size()) == n, ErrorKind::InvalidInput, "parameter has the wrong length");
    RVec out(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const RVec b = summands[ui].beta(t[ui]);
      const Rational err = Rational(9, 10) * radius * (2 * t[static_cast<std::size_t>((i + 1) % n)] - 1);
      // gamma . G gamma = 2 on H, so err / 2 along gamma shifts Psi_i by err.
      out[2 * ui] = scale[ui] * b[0] + err / 2;
      out[2 * ui + 1] = scale[ui] * b[1] + err / 2;
    }
    return out;
  };
  return fam;
}

WallFamily product_family(const WallFamily& a, const WallFamily& b) {
  WallFamily fam;
  fam.n = a.n + b.n;
  fam.lattice = lattice::direct_sum(a.lattice, b.lattice);
  const std::size_t ra = a.lattice.rank();
  const std::size_t rb = b.lattice.rank();
  for (const auto& g : a.gammas) {
    LatticeVector v = g;
    v.resize(ra + rb, 0);
    fam.gammas.push_back(std::move(v));
  }
  for (const auto& g : b.gammas) {
    LatticeVector v(ra, 0);
    v.insert(v.end(), g.begin(), g.end());
    fam.gammas.push_back(std::move(v));
  }
  const int na = a.n;
  auto sa = a.sigma;
  auto sb = b.sigma;
  fam.sigma = [sa, sb, na](const RVec& t) {
    RVec out = sa(RVec(t.begin(), t.begin() + na));
    const RVec y = sb(RVec(t.begin() + na, t.end()));
    out.insert(out.end(), y.begin(), y.end());
    return out;
  };
  fam.description = "product of (" + a.description + ") and (" + b.description + ")";
  return fam;
}

bool binom_odd(Int n, Int k) {
  require(n >= 0 && k >= 0 && k <= n, ErrorKind::InvalidInput, "binomial index out of range");
  return (k & ~n) == 0;
}

bool is_power_of_two(Int n) { return n > 0 && (n & (n - 1)) == 0; }

CompositionResult composition_sum(const CompositionTable& table) {
  require(table.n >= 1, ErrorKind::InvalidInput, "composition needs n >= 1");
  std::string missing;
  for (int k = 0; k <= table.n; ++k)
    if (!table.values.count(k)) missing += " " + std::to_string(k);
  require(missing.empty(), ErrorKind::InvalidInput, "incomplete composition table, missing k =" + missing);
  for (const auto& [k, v] : table.values) {
    (void)v;
    require(k >= 0 && k <= table.n, ErrorKind::InvalidInput, "composition entry k = " + std::to_string(k) + " out of range");
  }
  CompositionResult r;
  Int acc = 0;
  for (int k = 0; k <= table.n; ++k) {
    if (!binom_odd(table.n, k)) continue;
    r.contributing.push_back(k);
    acc += table.values.at(k) % 2;
  }
  r.value = ((acc % 2) + 2) % 2;
  return r;
}

GluingCount gluing_count(Int wall_degree, Int base_sw) {
  GluingCount g;
  g.value = (((wall_degree % 2) * (base_sw % 2)) % 2 + 2) % 2;
  return g;
}

}  // namespace famclass::wall

#include "famclass/vnengine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "famclass/error.hpp"

namespace famclass::vn {

namespace {

using Fn = std::function<Vec(const Vec&)>;

constexpr double kBoundaryTol = 1e-9;
constexpr double kPolishTol = 1e-12;
constexpr double kSampleTol = 1e-8;

std::string fmt(const Vec& v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

std::mt19937_64 make_rng(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  for (auto p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

Vec gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

Mat random_orthogonal(std::mt19937_64& rng, int n) {
  Mat a(n, n);
  for (int c = 0; c < n; ++c) a.col(c) = gaussian(rng, n);
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ() * Mat::Identity(n, n);
}

// One counted cell: total coordinates y = (x_1..x_d, free base coordinates).
struct CellDomain {
  std::string id;
  std::vector<int> pattern;
  std::vector<int> free_axes;
  int d = 0;
  int k = 0;
  Vec lo, hi;

  int dim() const { return d + k; }

  Vec base_of(const Vec& y) const {
    Vec b(static_cast<Eigen::Index>(pattern.size()));
    int f = 0;
    for (std::size_t a = 0; a < pattern.size(); ++a)
      b[static_cast<Eigen::Index>(a)] = pattern[a] >= 0 ? pattern[a] : y[d + f++];
    return b;
  }
  Vec fiber_of(const Vec& y) const { return y.head(d); }
  Vec join(const Vec& b, const Vec& x) const {
    Vec y(dim());
    y.head(d) = x;
    for (int f = 0; f < k; ++f) y[d + f] = b[free_axes[static_cast<std::size_t>(f)]];
    return y;
  }
};

CellDomain make_domain(const ToyFredholmFamily& fam, const cochain::Cell& cell) {
  CellDomain dom;
  dom.id = cell.id;
  dom.pattern = cell.pattern;
  dom.free_axes = cell.free_axes();
  dom.d = fam.fiber_dim;
  dom.k = static_cast<int>(dom.free_axes.size());
  dom.lo = Vec::Zero(dom.dim());
  dom.hi = Vec::Ones(dom.dim());
  dom.lo.head(dom.d).setConstant(-fam.radius);
  dom.hi.head(dom.d).setConstant(fam.radius);
  return dom;
}

// s + sum rho_i f_i(eps v_i), with the shift images precomputed.
struct Perturbed {
  const ToyFredholmFamily* fam = nullptr;
  std::vector<const Charge*> charges;
  std::vector<Vec> images;

  Vec operator()(const Vec& b, const Vec& x) const {
    Vec s = fam->section(b, x);
    for (std::size_t i = 0; i < charges.size(); ++i) {
      const Charge& c = *charges[i];
      const double r2 = (b - c.base_center).squaredNorm() + (x - c.fiber_center).squaredNorm();
      const double rc2 = c.radius * c.radius;
      if (r2 >= rc2) continue;
      const double w = 1.0 - r2 / rc2;
      s += (w * w) * images[i];
    }
    return s;
  }
};

Perturbed make_perturbed(const ToyFredholmFamily& fam, const FinDimPerturbation& phi, const Vec& v) {
  Perturbed p;
  p.fam = &fam;
  int offset = 0;
  for (const Charge& c : phi.charges) {
    const auto n = c.map.cols();
    p.charges.push_back(&c);
    p.images.push_back(c.map * (phi.epsilon * v.segment(offset, n)));
    offset += static_cast<int>(n);
  }
  return p;
}

Mat jacobian(const Fn& f, const Vec& y, const Vec& step) {
  const Vec f0 = f(y);
  Mat j(f0.size(), y.size());
  for (Eigen::Index a = 0; a < y.size(); ++a) {
    Vec yp = y, ym = y;
    yp[a] += step[a];
    ym[a] -= step[a];
    j.col(a) = (f(yp) - f(ym)) / (2.0 * step[a]);
  }
  return j;
}

struct Solve {
  Vec y;
  double norm = std::numeric_limits<double>::infinity();
};

// Levenberg-Marquardt on |f|^2, optionally projected onto the box [lo, hi].
Solve levenberg_marquardt(const Fn& f, Vec y, const Vec& step, double tol, int max_iter, const Vec* lo = nullptr,
                          const Vec* hi = nullptr) {
  auto clamp = [&](Vec& z) {
    if (!lo) return;
    z = z.cwiseMax(*lo).cwiseMin(*hi);
  };
  clamp(y);
  Vec r = f(y);
  double norm = r.norm();
  double lambda = 1e-3;
  for (int it = 0; it < max_iter && norm >= tol && std::isfinite(norm); ++it) {
    const Mat j = jacobian(f, y, step);
    const Mat jtj = j.transpose() * j;
    const Vec g = j.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      Mat a = jtj;
      a.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
      Vec trial = y - a.ldlt().solve(g);
      clamp(trial);
      const Vec rt = f(trial);
      const double nt = rt.norm();
      if (std::isfinite(nt) && nt < norm) {
        y = trial;
        r = rt;
        norm = nt;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
  }
  return {y, norm};
}

// Centres of grid boxes on which every component's corner range, widened by
// its own variation, contains 0.
std::vector<Vec> flagged_boxes(const Fn& f, const Vec& lo, const Vec& hi, int cells, int m) {
  const int n = static_cast<int>(lo.size());
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  std::size_t nodes = 1;
  for (int a = n - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = nodes;
    nodes *= static_cast<std::size_t>(cells + 1);
  }
  const Vec h = (hi - lo) / cells;
  auto node_coord = [&](std::size_t idx, std::vector<int>& digits) {
    Vec y(n);
    for (int a = 0; a < n; ++a) {
      digits[static_cast<std::size_t>(a)] = static_cast<int>((idx / stride[static_cast<std::size_t>(a)]) % (cells + 1));
      y[a] = lo[a] + digits[static_cast<std::size_t>(a)] * h[a];
    }
    return y;
  };

  std::vector<double> values(nodes * static_cast<std::size_t>(m));
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < nodes; ++idx) {
    const Vec v = f(node_coord(idx, digits));
    require(v.size() == m, ErrorKind::InvalidInput, "section returned a vector of the wrong length");
    for (int j = 0; j < m; ++j) values[idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] = v[j];
  }

  std::vector<char> flag(nodes, 1);
  std::vector<double> mn(nodes), mx(nodes);
  for (int j = 0; j < m; ++j) {
    for (std::size_t idx = 0; idx < nodes; ++idx) mn[idx] = mx[idx] = values[idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)];
    for (int a = 0; a < n; ++a) {
      const std::size_t s = stride[static_cast<std::size_t>(a)];
      for (std::size_t idx = 0; idx < nodes; ++idx) {
        if ((idx / s) % static_cast<std::size_t>(cells + 1) == static_cast<std::size_t>(cells)) continue;
        mn[idx] = std::min(mn[idx], mn[idx + s]);
        mx[idx] = std::max(mx[idx], mx[idx + s]);
      }
    }
    for (std::size_t idx = 0; idx < nodes; ++idx) {
      const double var = mx[idx] - mn[idx];
      if (!(mn[idx] - var <= 0.0 && mx[idx] + var >= 0.0)) flag[idx] = 0;
    }
  }

  std::vector<Vec> centres;
  for (std::size_t idx = 0; idx < nodes; ++idx) {
    if (!flag[idx]) continue;
    Vec y = node_coord(idx, digits);
    bool interior = true;
    for (int a = 0; a < n; ++a) interior = interior && digits[static_cast<std::size_t>(a)] < cells;
    if (!interior) continue;
    centres.push_back(y + 0.5 * h);
  }
  return centres;
}

double scaled_distance(const Vec& a, const Vec& b, const Vec& span) {
  return ((a - b).array() / span.array()).abs().maxCoeff();
}

std::size_t node_count(int cells, int n) {
  const double c = std::pow(static_cast<double>(cells + 1), n);
  return c > 1e15 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(c);
}

// Approximate zeros of an unperturbed section on a closed domain (degenerate
// zeros allowed), clustered.
std::vector<Vec> sample_zero_set(const Fn& f, const CellDomain& dom, int m) {
  const int n = dom.dim();
  int cells = n <= 2 ? 32 : n == 3 ? 16 : 10;
  const Vec span = dom.hi - dom.lo;
  const Vec step = span / (cells * 100.0);
  std::vector<Vec> found;
  std::vector<double> norms;
  for (const Vec& c : flagged_boxes(f, dom.lo, dom.hi, cells, m)) {
    Solve s = levenberg_marquardt(f, c, step, kPolishTol, 100, &dom.lo, &dom.hi);
    if (s.norm >= kSampleTol) continue;
    bool merged = false;
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (scaled_distance(found[i], s.y, span) < 1e-3) {
        if (s.norm < norms[i]) {
          found[i] = s.y;
          norms[i] = s.norm;
        }
        merged = true;
        break;
      }
    }
    if (!merged) {
      found.push_back(s.y);
      norms.push_back(s.norm);
    }
  }
  return found;
}

// Sampled minimum of |f| over a closed box, polished by projected LM.
Solve min_norm_on_box(const Fn& f, const Vec& lo, const Vec& hi, int per_axis) {
  const int n = static_cast<int>(lo.size());
  Solve best;
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  const Vec span = hi - lo;
  for (;;) {
    Vec y(n);
    for (int a = 0; a < n; ++a)
      y[a] = per_axis == 1 || span[a] == 0.0 ? lo[a] : lo[a] + span[a] * digit[static_cast<std::size_t>(a)] / (per_axis - 1);
    const double v = f(y).norm();
    if (v < best.norm) best = {y, v};
    int a = n - 1;
    while (a >= 0 && ++digit[static_cast<std::size_t>(a)] == per_axis) digit[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  Vec step = span.cwiseMax(1e-12) / (per_axis * 100.0);
  for (int a = 0; a < n; ++a)
    if (span[a] == 0.0) step[a] = 1e-7;
  Solve polished = levenberg_marquardt(f, best.y, step, kPolishTol, 60, &lo, &hi);
  return polished.norm < best.norm ? polished : best;
}

std::vector<cochain::Cell> counted_cells(const ToyFredholmFamily& fam) {
  const int degree = -fam.index();
  require(degree >= 0, ErrorKind::Hypothesis, "positive index needs a cohomology class alpha of positive degree");
  auto cx = fam.complex();
  require(degree <= cx->dim(), ErrorKind::InvalidInput,
          "class degree " + std::to_string(degree) + " exceeds base dimension of " + fam.name);
  return cx->cells(degree);
}

Vec draw_shift(const FinDimPerturbation& phi, std::uint64_t seed, std::uint64_t cell, int redraw) {
  const int n = phi.dimension();
  if (n == 0) return Vec();
  auto rng = make_rng({seed, phi.seed, cell, static_cast<std::uint64_t>(redraw), 0x5A17ULL});
  Vec v = gaussian(rng, n);
  return v / v.norm();
}

struct LevelZeros {
  std::vector<Zero> zeros;
  bool transverse = true;
};

LevelZeros zeros_at_level(const Fn& f, const CellDomain& dom, int cells, const CountOptions& opts) {
  const Vec span = dom.hi - dom.lo;
  const Vec h = span / cells;
  const Vec polish_step = h / 100.0;
  LevelZeros out;
  std::vector<Vec> accepted;
  for (const Vec& c : flagged_boxes(f, dom.lo, dom.hi, cells, dom.dim())) {
    Solve s = levenberg_marquardt(f, c, polish_step, kPolishTol, 60);
    if (s.norm >= kPolishTol) continue;
    if (((s.y - c).array().abs() > 0.75 * h.array()).any()) continue;
    for (int a = 0; a < dom.d; ++a)
      if (std::abs(s.y[a]) >= dom.hi[a] - kBoundaryTol)
        fail(ErrorKind::Hypothesis, "properness violated: zero on the fiber boundary at " + fmt(s.y));
    bool inside = true;
    for (int a = dom.d; a < dom.dim(); ++a) {
      const double t = s.y[a];
      if (std::abs(t) < kBoundaryTol || std::abs(t - 1.0) < kBoundaryTol)
        fail(ErrorKind::Hypothesis, "zero on the boundary of cell " + dom.id + " at " + fmt(s.y));
      if (t < 0.0 || t > 1.0) inside = false;
    }
    if (!inside) continue;
    bool duplicate = false;
    for (const Vec& z : accepted) duplicate = duplicate || scaled_distance(z, s.y, span) < 1e-7;
    if (duplicate) continue;
    accepted.push_back(s.y);
    const Mat j = jacobian(f, s.y, polish_step);
    double colnorms = 1.0;
    for (Eigen::Index c2 = 0; c2 < j.cols(); ++c2) colnorms *= std::max(j.col(c2).norm(), 1e-300);
    const double det = j.determinant();
    if (std::abs(det) / colnorms <= opts.transversality_tol) out.transverse = false;
    out.zeros.push_back(Zero{dom.fiber_of(s.y), dom.base_of(s.y), det > 0 ? 1 : -1});
  }
  return out;
}

CountResult count_cell(const ToyFredholmFamily& fam, const FinDimPerturbation& phi, const cochain::Cell& cell,
                       std::uint64_t cell_index, Ring ring, std::uint64_t seed, const CountOptions& opts) {
  const CellDomain dom = make_domain(fam, cell);
  require(fam.target_dim == dom.dim(), ErrorKind::Internal, "cell dimension does not match the class degree");
  CountResult result;
  result.cell = cell.id;
  result.ring = ring;
  for (int redraw = 0; redraw <= opts.max_redraws; ++redraw) {
    const Vec v = draw_shift(phi, seed, cell_index, redraw);
    const Perturbed p = make_perturbed(fam, phi, v);
    const Fn f = [&](const Vec& y) { return p(dom.base_of(y), dom.fiber_of(y)); };
    std::vector<Level> trace;
    std::vector<Zero> last;
    bool transverse = true;
    for (int level = 0;; ++level) {
      const int cells = opts.initial_grid << level;
      if (node_count(cells, dom.dim()) > opts.node_budget) {
        std::string t;
        for (const Level& l : trace)
          t += " [grid " + std::to_string(l.grid) + ": " + std::to_string(l.signed_count) + " from " +
               std::to_string(l.zeros) + " zeros]";
        fail(ErrorKind::NonStabilization, "count on cell " + cell.id + " of " + fam.name +
                                              " did not stabilize within the grid budget;" + t);
      }
      LevelZeros lz = zeros_at_level(f, dom, cells, opts);
      if (!lz.transverse) {
        transverse = false;
        break;
      }
      Int signed_count = 0;
      for (const Zero& z : lz.zeros) signed_count += z.sign;
      trace.push_back(Level{level, cells, signed_count, static_cast<int>(lz.zeros.size())});
      last = std::move(lz.zeros);
      const std::size_t t = trace.size();
      if (t >= 2 && trace[t - 1].signed_count == trace[t - 2].signed_count && trace[t - 1].zeros == trace[t - 2].zeros)
        break;
    }
    if (!transverse) continue;
    result.trace = std::move(trace);
    result.zeros = std::move(last);
    result.redraws = redraw;
    result.signed_count = result.trace.back().signed_count;
    result.value = reduce(ring, result.signed_count);
    return result;
  }
  fail(ErrorKind::NonStabilization, "transversality failure on cell " + cell.id + " of " + fam.name + " after " +
                                        std::to_string(opts.max_redraws) + " redraws");
}

void require_ring(const ToyFredholmFamily& fam, Ring ring) {
  if (ring == Ring::Z)
    require(fam.orientable(), ErrorKind::Hypothesis,
            "family " + fam.name + " is not orientable, so Z counts are undefined; use f2");
}

Mat matrix_power(const Mat& m, int k) {
  Mat r = Mat::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

}  // namespace

std::string to_string(BaseKind k) {
  switch (k) {
    case BaseKind::Point: return "point";
    case BaseKind::Cube: return "cube";
    case BaseKind::Torus: return "torus";
  }
  return "?";
}

cochain::ComplexPtr ToyFredholmFamily::complex() const {
  switch (base) {
    case BaseKind::Point: return cochain::build_point();
    case BaseKind::Cube: return cochain::build_cube(base_dim);
    case BaseKind::Torus: return cochain::build_torus(base_dim);
  }
  return nullptr;
}

bool ToyFredholmFamily::orientable() const {
  for (const Transition& t : monodromy)
    if (t.fiber.determinant() * t.target.determinant() <= 0) return false;
  return true;
}

int FinDimPerturbation::dimension() const {
  int n = extra_dims;
  for (const Charge& c : charges) n += static_cast<int>(c.map.cols());
  return n;
}

void validate_family(const ToyFredholmFamily& fam) {
  require(static_cast<bool>(fam.section), ErrorKind::InvalidInput, "family " + fam.name + " has no section");
  require(fam.fiber_dim >= 1 && fam.target_dim >= 1, ErrorKind::InvalidInput, "fiber and target dimensions must be positive");
  require(fam.radius > 0.0, ErrorKind::InvalidInput, "properness radius must be positive");
  if (fam.base == BaseKind::Point)
    require(fam.base_dim == 0, ErrorKind::InvalidInput, "point base has dimension 0");
  else
    require(fam.base_dim >= 1 && fam.base_dim <= 4, ErrorKind::InvalidInput, "base dimension must be in 1..4");
  if (fam.monodromy.empty()) return;
  require(fam.base == BaseKind::Torus, ErrorKind::InvalidInput, "monodromy needs a torus base");
  require(static_cast<int>(fam.monodromy.size()) == fam.base_dim, ErrorKind::InvalidInput,
          "one transition per torus axis expected");
  for (std::size_t i = 0; i < fam.monodromy.size(); ++i) {
    const Transition& t = fam.monodromy[i];
    require(t.fiber.rows() == fam.fiber_dim && t.fiber.cols() == fam.fiber_dim && t.target.rows() == fam.target_dim &&
                t.target.cols() == fam.target_dim,
            ErrorKind::InvalidInput, "transition " + std::to_string(i) + " has the wrong shape");
    require(std::abs(t.fiber.determinant()) > 1e-12 && std::abs(t.target.determinant()) > 1e-12, ErrorKind::InvalidInput,
            "transition " + std::to_string(i) + " is not invertible");
  }
  std::string bad;
  for (std::size_t i = 0; i < fam.monodromy.size(); ++i)
    for (std::size_t j = i + 1; j < fam.monodromy.size(); ++j) {
      const auto& a = fam.monodromy[i];
      const auto& b = fam.monodromy[j];
      if (!(a.fiber * b.fiber).isApprox(b.fiber * a.fiber, 1e-12) ||
          !(a.target * b.target).isApprox(b.target * a.target, 1e-12))
        bad += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  require(bad.empty(), ErrorKind::InvalidInput, "cocycle condition violated on face pairs" + bad);

  // Gluing relation on a sample of base and fiber points.
  const int per_axis = fam.base_dim <= 2 ? 5 : 3;
  for (int axis = 0; axis < fam.base_dim; ++axis) {
    const Transition& t = fam.monodromy[static_cast<std::size_t>(axis)];
    const int others = fam.base_dim - 1 + fam.fiber_dim;
    std::vector<int> digit(static_cast<std::size_t>(others), 0);
    for (;;) {
      Vec b0(fam.base_dim), x(fam.fiber_dim);
      int o = 0;
      for (int a = 0; a < fam.base_dim; ++a)
        b0[a] = a == axis ? 0.0 : (digit[static_cast<std::size_t>(o++)] + 0.37) / per_axis;
      for (int a = 0; a < fam.fiber_dim; ++a)
        x[a] = fam.radius * (2.0 * (digit[static_cast<std::size_t>(o++)] + 0.41) / per_axis - 1.0);
      Vec b1 = b0;
      b1[axis] = 1.0;
      const Vec lhs = fam.section(b1, t.fiber * x);
      const Vec rhs = t.target * fam.section(b0, x);
      require((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()), ErrorKind::InvalidInput,
              "gluing relation fails on axis " + std::to_string(axis) + " at b = " + fmt(b0) + ", x = " + fmt(x));
      int a = others - 1;
      while (a >= 0 && ++digit[static_cast<std::size_t>(a)] == per_axis) digit[static_cast<std::size_t>(a--)] = 0;
      if (a < 0) break;
    }
  }
}

double properness_margin(const ToyFredholmFamily& fam) {
  const int k = fam.base_dim;
  const int d = fam.fiber_dim;
  const int base_pts = k == 0 ? 1 : k <= 2 ? 17 : 5;
  const int fiber_pts = d <= 2 ? 33 : 9;
  double best = std::numeric_limits<double>::infinity();
  Vec witness_b, witness_x;
  std::vector<int> bd(static_cast<std::size_t>(k), 0);
  for (;;) {
    Vec b(k);
    for (int a = 0; a < k; ++a) b[a] = static_cast<double>(bd[static_cast<std::size_t>(a)]) / (base_pts - 1);
    for (int axis = 0; axis < d; ++axis)
      for (double side : {-1.0, 1.0}) {
        std::vector<int> fd(static_cast<std::size_t>(d), 0);
        for (;;) {
          Vec x(d);
          for (int a = 0; a < d; ++a)
            x[a] = a == axis ? side * fam.radius
                             : fam.radius * (2.0 * fd[static_cast<std::size_t>(a)] / (fiber_pts - 1) - 1.0);
          const double v = fam.section(b, x).norm();
          if (v < best) {
            best = v;
            witness_b = b;
            witness_x = x;
          }
          int a = d - 1;
          while (a >= 0 && (a == axis || ++fd[static_cast<std::size_t>(a)] == fiber_pts)) {
            if (a != axis) fd[static_cast<std::size_t>(a)] = 0;
            --a;
          }
          if (a < 0) break;
        }
      }
    int a = k - 1;
    while (a >= 0 && ++bd[static_cast<std::size_t>(a)] == base_pts) bd[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  require(best > 1e-9, ErrorKind::Hypothesis,
          "properness violated: s vanishes on the fiber boundary at b = " + fmt(witness_b) + ", x = " + fmt(witness_x));
  if (fam.s_min) {
    require(best >= *fam.s_min, ErrorKind::Hypothesis,
            "properness violated: |s| = " + std::to_string(best) + " < declared s_min at b = " + fmt(witness_b) +
                ", x = " + fmt(witness_x));
    return *fam.s_min;
  }
  return best;
}

FinDimPerturbation build_perturbation(const ToyFredholmFamily& fam, std::uint64_t seed, const CountOptions& opts) {
  validate_family(fam);
  FinDimPerturbation phi;
  phi.seed = seed;
  phi.epsilon = properness_margin(fam) / 10.0;
  auto rng = make_rng({seed, 0xC4A26EULL});
  int total = 0;
  for (const cochain::Cell& cell : counted_cells(fam)) {
    const CellDomain dom = make_domain(fam, cell);
    const Fn f = [&](const Vec& y) { return fam.section(dom.base_of(y), dom.fiber_of(y)); };
    for (const Vec& z : sample_zero_set(f, dom, fam.target_dim)) {
      const Vec x = dom.fiber_of(z);
      const Vec b = dom.base_of(z);
      if (x.lpNorm<Eigen::Infinity>() > 0.95 * fam.radius)
        fail(ErrorKind::Hypothesis, "properness violated: zero of s near the fiber boundary at b = " + fmt(b) +
                                        ", x = " + fmt(x));
      const Mat j = jacobian(f, z, (dom.hi - dom.lo) * 1e-5);
      Eigen::JacobiSVD<Mat> svd(j, Eigen::ComputeFullU);
      const Vec sv = svd.singularValues();
      const double cutoff = 1e-3 * std::max(1.0, sv.size() ? sv[0] : 0.0);
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > cutoff ? 1 : 0;
      const int complement = fam.target_dim - rank;
      if (complement == 0) continue;
      total += complement;
      require(total <= opts.max_perturbation_dim, ErrorKind::NonStabilization,
              "surjectivity needs more than " + std::to_string(opts.max_perturbation_dim) +
                  " perturbation directions; offending zero at b = " + fmt(b) + ", x = " + fmt(x));
      double radius = 0.25 * fam.radius;
      radius = std::min(radius, 0.9 * (fam.radius - x.lpNorm<Eigen::Infinity>()));
      for (int fa : dom.free_axes) radius = std::min(radius, 0.9 * std::min(b[fa], 1.0 - b[fa]));
      require(radius > 1e-6, ErrorKind::Hypothesis, "zero at b = " + fmt(b) + " is too close to the boundary of cell " + cell.id);
      Charge c;
      c.cell = cell.id;
      c.base_center = b;
      c.fiber_center = x;
      c.radius = radius;
      c.map = svd.matrixU().rightCols(complement) * random_orthogonal(rng, complement);
      phi.charges.push_back(std::move(c));
    }
  }
  return phi;
}

FinDimPerturbation suspend(const FinDimPerturbation& phi, int extra) {
  require(extra >= 0, ErrorKind::InvalidInput, "suspension needs a nonnegative number of directions");
  FinDimPerturbation out = phi;
  out.extra_dims += extra;
  return out;
}

CountResult count_point(const ToyFredholmFamily& fam, const FinDimPerturbation& phi, Ring ring, std::uint64_t seed,
                        const CountOptions& opts) {
  require(fam.base == BaseKind::Point, ErrorKind::InvalidInput, "count_point needs a point base");
  require(fam.index() == 0, ErrorKind::Hypothesis, "nonzero index needs a family or a class alpha");
  return family_class(fam, phi, ring, seed, {}, opts).cells.front();
}

FamilyClass family_class(const ToyFredholmFamily& fam, const FinDimPerturbation& phi, Ring ring, std::uint64_t seed,
                         const std::vector<std::string>& zero_free, const CountOptions& opts) {
  validate_family(fam);
  require_ring(fam, ring);
  const auto cells = counted_cells(fam);
  auto cx = fam.complex();

  for (const std::string& id : zero_free) {
    auto [dim, idx] = cx->locate(id);
    const CellDomain dom = make_domain(fam, cx->cell(dim, idx));
    const Fn f = [&](const Vec& y) { return fam.section(dom.base_of(y), dom.fiber_of(y)); };
    const int per_axis = dom.dim() <= 2 ? 33 : dom.dim() == 3 ? 13 : 7;
    const Solve s = min_norm_on_box(f, dom.lo, dom.hi, per_axis);
    require(s.norm >= kSampleTol, ErrorKind::Hypothesis,
            "section vanishes on declared zero-free cell " + id + " at b = " + fmt(dom.base_of(s.y)) +
                ", x = " + fmt(dom.fiber_of(s.y)));
  }

  FamilyClass out{cochain::zero_cochain(cx, -fam.index(), ring), {}};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (std::find(zero_free.begin(), zero_free.end(), cells[i].id) != zero_free.end()) {
      CountResult skipped;
      skipped.cell = cells[i].id;
      skipped.ring = ring;
      out.cells.push_back(std::move(skipped));
      continue;
    }
    CountResult r = count_cell(fam, phi, cells[i], i, ring, seed, opts);
    out.cochain.values[i] = r.value;
    out.cells.push_back(std::move(r));
  }
  return out;
}

ToyFredholmFamily assemble_twisted_family(ToyFredholmFamily cube_family, std::vector<Transition> transitions) {
  require(cube_family.base == BaseKind::Cube, ErrorKind::InvalidInput, "twisted assembly needs a cube family");
  cube_family.base = BaseKind::Torus;
  cube_family.monodromy = std::move(transitions);
  validate_family(cube_family);
  return cube_family;
}

ToyFredholmFamily pullback_degree(const ToyFredholmFamily& fam, int k) {
  require(fam.base == BaseKind::Torus && fam.base_dim == 1, ErrorKind::InvalidInput, "pullback needs a family over T^1");
  require(k >= 1, ErrorKind::InvalidInput, "covering degree must be positive");
  const Mat phi = fam.monodromy.empty() ? Mat::Identity(fam.fiber_dim, fam.fiber_dim) : fam.monodromy[0].fiber;
  const Mat psi = fam.monodromy.empty() ? Mat::Identity(fam.target_dim, fam.target_dim) : fam.monodromy[0].target;
  std::vector<Mat> phi_inv_pow, psi_pow;
  const Mat phi_inv = phi.inverse();
  for (int j = 0; j <= k; ++j) {
    phi_inv_pow.push_back(matrix_power(phi_inv, j));
    psi_pow.push_back(matrix_power(psi, j));
  }
  ToyFredholmFamily out = fam;
  out.name = fam.name + "^" + std::to_string(k);
  const Section s = fam.section;
  out.section = [s, k, phi_inv_pow, psi_pow](const Vec& b, const Vec& x) {
    const double kb = k * b[0];
    const int j = std::clamp(static_cast<int>(std::floor(kb)), 0, k - 1);
    Vec local(1);
    local[0] = kb - j;
    return Vec(psi_pow[static_cast<std::size_t>(j)] * s(local, phi_inv_pow[static_cast<std::size_t>(j)] * x));
  };
  out.monodromy = {Transition{matrix_power(phi, k), matrix_power(psi, k)}};
  validate_family(out);
  return out;
}

IndependenceVerdict check_perturbation_independence(const ToyFredholmFamily& fam, const FinDimPerturbation& phi1,
                                                    const FinDimPerturbation& phi2, Ring ring, std::uint64_t seed,
                                                    const CountOptions& opts) {
  IndependenceVerdict v;
  v.first = family_class(fam, phi1, ring, seed, {}, opts);
  v.second = family_class(fam, phi2, ring, seed + 1, {}, opts);
  v.agree = v.first.cochain.values == v.second.cochain.values;
  return v;
}

CobordismVerdict check_cobordism_invariance(const ToyFredholmFamily& fam0, const ToyFredholmFamily& fam1, Ring ring,
                                            std::uint64_t seed, const CountOptions& opts) {
  require(fam0.base == fam1.base && fam0.base_dim == fam1.base_dim && fam0.fiber_dim == fam1.fiber_dim &&
              fam0.target_dim == fam1.target_dim && fam0.radius == fam1.radius,
          ErrorKind::InvalidInput, "cobordant families must share base, dimensions and radius");
  CobordismVerdict v;
  v.boundary_margin = std::numeric_limits<double>::infinity();
  for (const cochain::Cell& cell : counted_cells(fam0)) {
    const CellDomain dom = make_domain(fam0, cell);
    const int n = dom.dim();
    // Coordinates (y, tau); walk every face of the cell x fiber box.
    for (int axis = 0; axis < n; ++axis)
      for (int side = 0; side < 2; ++side) {
        Vec lo(n + 1), hi(n + 1);
        lo.head(n) = dom.lo;
        hi.head(n) = dom.hi;
        lo[n] = 0.0;
        hi[n] = 1.0;
        lo[axis] = hi[axis] = side ? dom.hi[axis] : dom.lo[axis];
        const Fn f = [&](const Vec& z) {
          const Vec y = z.head(n);
          const double tau = z[n];
          const Vec b = dom.base_of(y), x = dom.fiber_of(y);
          return Vec((1.0 - tau) * fam0.section(b, x) + tau * fam1.section(b, x));
        };
        const Solve s = min_norm_on_box(f, lo, hi, n + 1 <= 3 ? 17 : 9);
        v.boundary_margin = std::min(v.boundary_margin, s.norm);
        if (s.norm < kSampleTol)
          fail(ErrorKind::Hypothesis, "homotopy vanishes on the boundary of cell " + cell.id + " at b = " +
                                          fmt(dom.base_of(s.y.head(n))) + ", x = " + fmt(dom.fiber_of(s.y.head(n))) +
                                          ", tau = " + std::to_string(s.y[n]));
      }
  }
  v.start = family_class(fam0, build_perturbation(fam0, seed, opts), ring, seed, {}, opts);
  v.end = family_class(fam1, build_perturbation(fam1, seed + 1, opts), ring, seed + 1, {}, opts);
  v.agree = v.start.cochain.values == v.end.cochain.values;
  return v;
}

}  // namespace famclass::vn

#include "famclass/cochain.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "famclass/error.hpp"

namespace famclass::cochain {

namespace {

std::string pattern_id(const std::vector<int>& pattern) {
  std::string s;
  for (int p : pattern) s += p < 0 ? '*' : static_cast<char>('0' + p);
  return s;
}

// Enumerates all patterns over `alphabet` in lexicographic order, grouped by dimension.
std::vector<std::vector<Cell>> cube_like_cells(int n, const std::vector<int>& alphabet) {
  std::vector<std::vector<Cell>> cells(static_cast<std::size_t>(n) + 1);
  std::vector<int> pattern(static_cast<std::size_t>(n), alphabet.front());
  const std::size_t base = alphabet.size();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= base;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    int dim = 0;
    for (int i = n - 1; i >= 0; --i) {
      pattern[static_cast<std::size_t>(i)] = alphabet[c % base];
      c /= base;
    }
    for (int p : pattern) dim += p < 0 ? 1 : 0;
    cells[static_cast<std::size_t>(dim)].push_back(Cell{pattern_id(pattern), dim, pattern});
  }
  return cells;
}

// Boundary of pattern cells: d e = sum_p (-1)^p (e|_{x_a = 1} - e|_{x_a = 0}) over
// free axes a (the p-th free axis). `wrap` identifies x_a = 1 with x_a = 0.
std::vector<IntMatrix> pattern_boundaries(const std::vector<std::vector<Cell>>& cells, bool wrap) {
  std::vector<IntMatrix> bd;
  bd.emplace_back(0, cells[0].size());
  for (std::size_t k = 1; k < cells.size(); ++k) {
    std::map<std::string, std::size_t> lower;
    for (std::size_t i = 0; i < cells[k - 1].size(); ++i) lower[cells[k - 1][i].id] = i;
    IntMatrix m(cells[k - 1].size(), cells[k].size());
    for (std::size_t j = 0; j < cells[k].size(); ++j) {
      const Cell& e = cells[k][j];
      int p = 0;
      for (std::size_t a = 0; a < e.pattern.size(); ++a) {
        if (e.pattern[a] >= 0) continue;
        const Int sign = (p % 2 == 0) ? 1 : -1;
        auto face = e.pattern;
        face[a] = 1;
        if (wrap) face[a] = 0;
        m(lower.at(pattern_id(face)), j) += sign;
        face[a] = 0;
        m(lower.at(pattern_id(face)), j) -= sign;
        ++p;
      }
    }
    bd.push_back(std::move(m));
  }
  return bd;
}

IntMatrix mod2(IntMatrix a) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = ((a(r, c) % 2) + 2) % 2;
  return a;
}

void require_same_space(const CellCochain& a, const CellCochain& b) {
  require(a.complex == b.complex, ErrorKind::InvalidInput, "cochains live on different complexes");
  require(a.degree == b.degree, ErrorKind::InvalidInput, "cochain degree mismatch");
  require(a.ring == b.ring, ErrorKind::InvalidInput, "cochain ring mismatch");
}

}  // namespace

std::vector<int> Cell::free_axes() const {
  std::vector<int> axes;
  for (std::size_t a = 0; a < pattern.size(); ++a)
    if (pattern[a] < 0) axes.push_back(static_cast<int>(a));
  return axes;
}

CellComplex::CellComplex(std::vector<std::vector<Cell>> cells, std::vector<IntMatrix> boundary, std::string name)
    : name_(std::move(name)), cells_(std::move(cells)), boundary_(std::move(boundary)) {
  require(!cells_.empty(), ErrorKind::InvalidInput, "complex needs at least one dimension");
  if (boundary_.empty()) boundary_.emplace_back(0, cells_[0].size());
  require(boundary_.size() == cells_.size(), ErrorKind::InvalidInput, "one boundary matrix per dimension expected");
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    for (std::size_t i = 0; i < cells_[k].size(); ++i) {
      Cell& c = cells_[k][i];
      c.dim = static_cast<int>(k);
      require(index_.emplace(c.id, std::make_pair(static_cast<int>(k), i)).second, ErrorKind::InvalidInput,
              "duplicate cell id " + c.id);
    }
    if (k == 0) continue;
    const IntMatrix& d = boundary_[k];
    require(d.rows() == cells_[k - 1].size() && d.cols() == cells_[k].size(), ErrorKind::InvalidInput,
            "boundary matrix " + std::to_string(k) + " has wrong shape");
    if (k >= 2) {
      const IntMatrix dd = boundary_[k - 1] * d;
      for (std::size_t r = 0; r < dd.rows(); ++r)
        for (std::size_t c = 0; c < dd.cols(); ++c)
          require(dd(r, c) == 0, ErrorKind::InvalidInput, "boundary of boundary is nonzero in dimension " + std::to_string(k));
    }
  }
}

std::size_t CellComplex::count(int k) const {
  if (k < 0 || k > dim()) return 0;
  return cells_[static_cast<std::size_t>(k)].size();
}

const std::vector<Cell>& CellComplex::cells(int k) const {
  require(k >= 0 && k <= dim(), ErrorKind::InvalidInput, "no cells of dimension " + std::to_string(k));
  return cells_[static_cast<std::size_t>(k)];
}

std::pair<int, std::size_t> CellComplex::locate(const std::string& id) const {
  auto it = index_.find(id);
  require(it != index_.end(), ErrorKind::InvalidInput, "unknown cell " + id + " in " + name_);
  return it->second;
}

ComplexPtr build_torus(int n) {
  require(n >= 1 && n <= 4, ErrorKind::InvalidInput, "torus dimension must be in 1..4");
  auto cells = cube_like_cells(n, {0, -1});
  auto bd = pattern_boundaries(cells, true);
  return std::make_shared<CellComplex>(std::move(cells), std::move(bd), "T" + std::to_string(n));
}

ComplexPtr build_cube(int n) {
  require(n >= 1 && n <= 4, ErrorKind::InvalidInput, "cube dimension must be in 1..4");
  auto cells = cube_like_cells(n, {0, 1, -1});
  auto bd = pattern_boundaries(cells, false);
  return std::make_shared<CellComplex>(std::move(cells), std::move(bd), "I" + std::to_string(n));
}

ComplexPtr build_circle(int m) {
  require(m >= 1, ErrorKind::InvalidInput, "circle needs at least one edge");
  std::vector<std::vector<Cell>> cells(2);
  for (int i = 0; i < m; ++i) {
    cells[0].push_back(Cell{"v" + std::to_string(i), 0, {}});
    cells[1].push_back(Cell{"e" + std::to_string(i), 1, {}});
  }
  IntMatrix d(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    d(static_cast<std::size_t>((j + 1) % m), static_cast<std::size_t>(j)) += 1;
    d(static_cast<std::size_t>(j), static_cast<std::size_t>(j)) -= 1;
  }
  return std::make_shared<CellComplex>(std::move(cells), std::vector<IntMatrix>{IntMatrix(0, static_cast<std::size_t>(m)), d},
                                       "S1[" + std::to_string(m) + "]");
}

ComplexPtr build_point() {
  return std::make_shared<CellComplex>(std::vector<std::vector<Cell>>{{Cell{"pt", 0, {}}}}, std::vector<IntMatrix>{},
                                       "point");
}

Int CellCochain::at(const std::string& id) const {
  auto [k, i] = complex->locate(id);
  require(k == degree, ErrorKind::InvalidInput, "cell " + id + " is not of degree " + std::to_string(degree));
  return values[i];
}

bool CellCochain::is_zero() const {
  return std::all_of(values.begin(), values.end(), [this](Int v) { return reduce(ring, v) == 0; });
}

CellCochain zero_cochain(ComplexPtr complex, int degree, Ring ring) {
  const std::size_t n = complex->count(degree);
  return CellCochain{std::move(complex), degree, ring, std::vector<Int>(n, 0)};
}

CellCochain make_cochain(ComplexPtr complex, int degree, Ring ring, std::vector<Int> values) {
  require(values.size() == complex->count(degree), ErrorKind::InvalidInput,
          "cochain has " + std::to_string(values.size()) + " values, complex has " +
              std::to_string(complex->count(degree)) + " cells of degree " + std::to_string(degree));
  for (auto& v : values) v = reduce(ring, v);
  return CellCochain{std::move(complex), degree, ring, std::move(values)};
}

CellCochain coboundary(const CellCochain& c) {
  const int k = c.degree + 1;
  CellCochain out = zero_cochain(c.complex, k, c.ring);
  if (k > c.complex->dim()) return out;
  const IntMatrix& d = c.complex->boundary(k);
  for (std::size_t j = 0; j < d.cols(); ++j) {
    Int acc = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) acc += d(i, j) * c.values[i];
    out.values[j] = reduce(c.ring, acc);
  }
  return out;
}

bool is_cocycle(const CellCochain& c) { return coboundary(c).is_zero(); }

CellCochain add(const CellCochain& a, const CellCochain& b, Int scale_b) {
  require_same_space(a, b);
  CellCochain out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = reduce(a.ring, a.values[i] + scale_b * b.values[i]);
  return out;
}

bool cohomologous(const CellCochain& c1, const CellCochain& c2) {
  require_same_space(c1, c2);
  require(is_cocycle(c1) && is_cocycle(c2), ErrorKind::Hypothesis, "cohomologous: inputs must be cocycles");
  const CellCochain diff = add(c1, c2, -1);
  if (diff.is_zero()) return true;
  if (c1.degree == 0) return false;
  // delta: C^{k-1} -> C^k is the transpose of the boundary C_k -> C_{k-1}.
  const IntMatrix delta = c1.complex->boundary(c1.degree).transpose();
  if (c1.ring == Ring::Z) return solve_integer(delta, diff.values).has_value();
  IntMatrix augmented(delta.rows(), delta.cols() + 1);
  for (std::size_t r = 0; r < delta.rows(); ++r) {
    for (std::size_t c = 0; c < delta.cols(); ++c) augmented(r, c) = delta(r, c);
    augmented(r, delta.cols()) = diff.values[r];
  }
  return rank_f2(delta) == rank_f2(augmented);
}

Int pair_fundamental(const CellCochain& c, const std::vector<int>& orientation) {
  const int top = c.complex->dim();
  require(c.degree == top, ErrorKind::InvalidInput,
          "pairing with the fundamental class needs a top-degree cochain (degree " + std::to_string(top) + ")");
  std::vector<int> o = orientation;
  if (o.empty()) o.assign(c.complex->count(top), 1);
  require(o.size() == c.complex->count(top), ErrorKind::InvalidInput, "one orientation sign per top cell expected");
  if (top > 0) {
    const IntMatrix& d = c.complex->boundary(top);
    for (std::size_t r = 0; r < d.rows(); ++r) {
      Int acc = 0;
      for (std::size_t j = 0; j < d.cols(); ++j) acc += d(r, j) * o[j];
      require(reduce(c.ring, acc) == 0, ErrorKind::Hypothesis,
              "complex " + c.complex->name() + " is not closed under the given orientation");
    }
  }
  Int acc = 0;
  for (std::size_t j = 0; j < c.values.size(); ++j) acc += o[j] * c.values[j];
  return reduce(c.ring, acc);
}

CellCochain class_from_cell_counts(ComplexPtr complex, int degree, const std::map<std::string, Int>& counts, Ring ring) {
  require(degree >= 0 && degree <= complex->dim(), ErrorKind::InvalidInput,
          "complex " + complex->name() + " has no cells of degree " + std::to_string(degree));
  std::vector<Int> values;
  for (const Cell& e : complex->cells(degree)) {
    auto it = counts.find(e.id);
    require(it != counts.end(), ErrorKind::InvalidInput, "missing count for cell " + e.id);
    values.push_back(it->second);
  }
  for (const auto& [id, v] : counts) {
    auto [k, i] = complex->locate(id);
    (void)i;
    (void)v;
    require(k == degree, ErrorKind::InvalidInput, "count supplied for cell " + id + " of wrong degree");
  }
  CellCochain c = make_cochain(std::move(complex), degree, ring, std::move(values));
  if (c.complex->dim() > degree)
    require(is_cocycle(c), ErrorKind::Hypothesis, "assembled cell counts do not form a cocycle");
  return c;
}

SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SmithForm s{IntMatrix::identity(m), a, IntMatrix::identity(n)};
  IntMatrix& d = s.d;

  auto row_op = [&](std::size_t dst, std::size_t src, Int q) {  // row dst -= q * row src
    for (std::size_t c = 0; c < n; ++c) d(dst, c) -= q * d(src, c);
    for (std::size_t c = 0; c < m; ++c) s.u(dst, c) -= q * s.u(src, c);
  };
  auto col_op = [&](std::size_t dst, std::size_t src, Int q) {  // col dst -= q * col src
    for (std::size_t r = 0; r < m; ++r) d(r, dst) -= q * d(r, src);
    for (std::size_t r = 0; r < n; ++r) s.v(r, dst) -= q * s.v(r, src);
  };
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(d(i, c), d(j, c));
    for (std::size_t c = 0; c < m; ++c) std::swap(s.u(i, c), s.u(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < m; ++r) std::swap(d(r, i), d(r, j));
    for (std::size_t r = 0; r < n; ++r) std::swap(s.v(r, i), s.v(r, j));
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    std::size_t pr = m, pc = n;
    for (std::size_t r = t; r < m; ++r)
      for (std::size_t c = t; c < n; ++c)
        if (d(r, c) != 0 && (pr == m || std::llabs(d(r, c)) < std::llabs(d(pr, pc)))) {
          pr = r;
          pc = c;
        }
    if (pr == m) break;
    swap_rows(t, pr);
    swap_cols(t, pc);
    for (;;) {
      bool clean = true;
      for (std::size_t r = t + 1; r < m; ++r) {
        if (d(r, t) == 0) continue;
        row_op(r, t, d(r, t) / d(t, t));
        if (d(r, t) != 0) {
          swap_rows(r, t);
          clean = false;
        }
      }
      for (std::size_t c = t + 1; c < n; ++c) {
        if (d(t, c) == 0) continue;
        col_op(c, t, d(t, c) / d(t, t));
        if (d(t, c) != 0) {
          swap_cols(c, t);
          clean = false;
        }
      }
      if (!clean) continue;
      std::size_t bad = m;
      for (std::size_t r = t + 1; r < m && bad == m; ++r)
        for (std::size_t c = t + 1; c < n; ++c)
          if (d(r, c) % d(t, t) != 0) {
            bad = r;
            break;
          }
      if (bad == m) break;
      row_op(t, bad, -1);
    }
    if (d(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) d(t, c) = -d(t, c);
      for (std::size_t c = 0; c < m; ++c) s.u(t, c) = -s.u(t, c);
    }
  }
  return s;
}

std::optional<std::vector<Int>> solve_integer(const IntMatrix& a, const std::vector<Int>& b) {
  require(b.size() == a.rows(), ErrorKind::InvalidInput, "right-hand side length mismatch");
  const SmithForm s = smith_normal_form(a);
  const std::vector<Int> ub = s.u * b;
  std::vector<Int> y(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const Int di = i < a.cols() ? s.d(i, i) : 0;
    if (di == 0) {
      if (ub[i] != 0) return std::nullopt;
      continue;
    }
    if (ub[i] % di != 0) return std::nullopt;
    y[i] = ub[i] / di;
  }
  return s.v * y;
}

int rank_f2(const IntMatrix& input) {
  IntMatrix a = mod2(input);
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t piv = row;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(piv, k), a(row, k));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, c) == 0) continue;
      for (std::size_t k = 0; k < a.cols(); ++k) a(r, k) ^= a(row, k);
    }
    ++row;
    ++rank;
  }
  return rank;
}

std::vector<int> betti_numbers(const CellComplex& complex, Ring ring) {
  auto rank_of = [ring](const IntMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if (ring == Ring::F2) return rank_f2(m);
    const SmithForm s = smith_normal_form(m);
    int r = 0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) r += s.d(i, i) != 0 ? 1 : 0;
    return r;
  };
  std::vector<int> betti;
  for (int k = 0; k <= complex.dim(); ++k) {
    const int rk = k > 0 ? rank_of(complex.boundary(k)) : 0;
    const int rk1 = k < complex.dim() ? rank_of(complex.boundary(k + 1)) : 0;
    betti.push_back(static_cast<int>(complex.count(k)) - rk - rk1);
  }
  return betti;
}

void check_chain_map(const CellularMap& f) {
  const int top = f.source->dim();
  require(static_cast<int>(f.chain.size()) == top + 1, ErrorKind::InvalidInput, "chain map needs one matrix per source dimension");
  for (int k = 0; k <= top; ++k) {
    const IntMatrix& m = f.chain[static_cast<std::size_t>(k)];
    require(m.rows() == f.target->count(k) && m.cols() == f.source->count(k), ErrorKind::InvalidInput,
            "chain map matrix " + std::to_string(k) + " has wrong shape");
    if (k == 0) continue;
    const IntMatrix lhs = f.target->boundary(k) * m;
    const IntMatrix rhs = f.chain[static_cast<std::size_t>(k - 1)] * f.source->boundary(k);
    require(lhs == rhs, ErrorKind::InvalidInput, "map does not commute with the boundary in degree " + std::to_string(k));
  }
}

CellCochain pullback(const CellularMap& f, const CellCochain& c) {
  require(c.complex == f.target, ErrorKind::InvalidInput, "cochain does not live on the target of the map");
  require(c.degree < static_cast<int>(f.chain.size()), ErrorKind::InvalidInput, "map has no component in this degree");
  const IntMatrix& m = f.chain[static_cast<std::size_t>(c.degree)];
  return make_cochain(f.source, c.degree, c.ring, m.transpose() * c.values);
}

CellularMap circle_cover(int edges, int degree) {
  require(degree >= 1, ErrorKind::InvalidInput, "covering degree must be positive");
  auto target = build_circle(edges);
  auto source = build_circle(edges * degree);
  const auto n = static_cast<std::size_t>(edges);
  IntMatrix f0(n, n * static_cast<std::size_t>(degree)), f1(n, n * static_cast<std::size_t>(degree));
  for (std::size_t j = 0; j < f0.cols(); ++j) {
    f0(j % n, j) = 1;
    f1(j % n, j) = 1;
  }
  CellularMap f{source, target, {f0, f1}};
  check_chain_map(f);
  return f;
}

CellularMap torus1_degree_map(int degree) {
  auto t = build_torus(1);
  IntMatrix f0(1, 1, 1), f1(1, 1, degree);
  CellularMap f{t, t, {f0, f1}};
  check_chain_map(f);
  return f;
}

}  // namespace famclass::cochain

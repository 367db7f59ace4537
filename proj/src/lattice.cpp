#include "famclass/lattice.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "famclass/error.hpp"

namespace famclass::lattice {

namespace {

using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = Rational(static_cast<long>(m(r, c)));
  return out;
}

Rational det_in_place(RatMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a[r][col]) == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

// Solves a x = b for invertible square a.
std::vector<Rational> solve(RatMatrix a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) fail(ErrorKind::Internal, "singular change of basis");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

void check_block(const IntMatrix& g, std::size_t index) {
  const std::string where = "block " + std::to_string(index);
  require(g.rows() == g.cols() && g.rows() > 0, ErrorKind::InvalidInput, where + ": Gram matrix must be square and nonempty");
  require(g.is_symmetric(), ErrorKind::InvalidInput, where + ": Gram matrix is not symmetric");
  require(sgn(determinant(g)) != 0, ErrorKind::InvalidInput, where + ": Gram matrix is singular");
}

IntMatrix block_gram(const Block& b) {
  switch (b.type) {
    case BlockType::H: {
      IntMatrix g(2, 2);
      g(0, 1) = g(1, 0) = b.sign;
      return g;
    }
    case BlockType::E8: {
      IntMatrix g = e8_gram();
      for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) g(r, c) *= b.sign;
      return g;
    }
    case BlockType::Diag: {
      IntMatrix g(b.entries.size(), b.entries.size());
      for (std::size_t i = 0; i < b.entries.size(); ++i) g(i, i) = b.entries[i];
      return g;
    }
    case BlockType::Custom:
      return b.gram;
  }
  fail(ErrorKind::Internal, "unknown block type");
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.rows();
  IntMatrix g(n, n);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < p.rows(); ++r)
      for (std::size_t c = 0; c < p.cols(); ++c) g(off + r, off + c) = p(r, c);
    off += p.rows();
  }
  return g;
}

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.front().size() : 0;
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    require(rows[i].size() == c, ErrorKind::InvalidInput, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<std::vector<Int>> IntMatrix::to_rows() const {
  std::vector<std::vector<Int>> out(rows_, std::vector<Int>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c);
  return out;
}

bool IntMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  require(a.cols() == b.rows(), ErrorKind::InvalidInput, "matrix shape mismatch in product");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int x = a(r, k);
      if (x == 0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += x * b(k, c);
    }
  return out;
}

std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v) {
  require(a.cols() == v.size(), ErrorKind::InvalidInput, "matrix-vector shape mismatch");
  std::vector<Int> out(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[r] += a(r, c) * v[c];
  return out;
}

Rational determinant(const IntMatrix& m) {
  require(m.rows() == m.cols(), ErrorKind::InvalidInput, "determinant of non-square matrix");
  return det_in_place(to_rational(m));
}

Block hyperbolic(int sign) { return Block{BlockType::H, sign, {}, {}}; }
Block e8(int sign) { return Block{BlockType::E8, sign, {}, {}}; }
Block diagonal(std::vector<Int> entries) { return Block{BlockType::Diag, 1, std::move(entries), {}}; }
Block custom(IntMatrix gram) { return Block{BlockType::Custom, 1, {}, std::move(gram)}; }

IntMatrix e8_gram() {
  // Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = 2;
  auto edge = [&g](std::size_t a, std::size_t b) { g(a, b) = g(b, a) = -1; };
  for (std::size_t i = 0; i + 1 < 7; ++i) edge(i, i + 1);
  edge(4, 7);
  return g;
}

Lattice::Lattice(IntMatrix gram) : gram_(std::move(gram)) {
  check_block(gram_, 0);
  blocks_ = {custom(gram_)};
}

Int Lattice::pair(const LatticeVector& u, const LatticeVector& v) const {
  require(u.size() == rank() && v.size() == rank(), ErrorKind::InvalidInput,
          "vector length does not match lattice rank " + std::to_string(rank()));
  Int acc = 0;
  for (std::size_t r = 0; r < rank(); ++r) {
    if (u[r] == 0) continue;
    for (std::size_t c = 0; c < rank(); ++c) acc += u[r] * gram_(r, c) * v[c];
  }
  return acc;
}

Lattice build_lattice(const std::vector<Block>& blocks) {
  require(!blocks.empty(), ErrorKind::InvalidInput, "lattice needs at least one block");
  std::vector<IntMatrix> parts;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    require(b.sign == 1 || b.sign == -1, ErrorKind::InvalidInput, "block " + std::to_string(i) + ": sign must be +1 or -1");
    if (b.type == BlockType::Diag)
      require(!b.entries.empty(), ErrorKind::InvalidInput, "block " + std::to_string(i) + ": empty diagonal block");
    IntMatrix g = block_gram(b);
    check_block(g, i);
    parts.push_back(std::move(g));
  }
  Lattice l(block_diagonal(parts));
  l.blocks_ = blocks;
  return l;
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  Lattice l(block_diagonal({a.gram(), b.gram()}));
  l.blocks_ = a.blocks();
  l.blocks_.insert(l.blocks_.end(), b.blocks().begin(), b.blocks().end());
  return l;
}

Lattice repeat(const Lattice& l, int copies) {
  require(copies >= 1, ErrorKind::InvalidInput, "repeat count must be positive");
  Lattice out = l;
  for (int i = 1; i < copies; ++i) out = direct_sum(out, l);
  return out;
}

Diagonalization diagonalize(const Lattice& l, std::optional<std::uint64_t> pivot_seed) {
  const std::size_t n = l.rank();
  RatMatrix a = to_rational(l.gram());
  RatMatrix p = to_rational(IntMatrix::identity(n));  // p[row][col]
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  std::optional<std::mt19937_64> rng;
  if (pivot_seed) rng.emplace(*pivot_seed);

  auto pick = [&rng](std::size_t count) -> std::size_t {
    if (!rng || count <= 1) return 0;
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(*rng);
  };
  // col j <- col j + f * col i, applied as a congruence on a and to the basis p.
  auto add_column = [&](std::size_t j, std::size_t i, const Rational& f) {
    for (std::size_t r = 0; r < n; ++r) a[r][j] += f * a[r][i];
    for (std::size_t c = 0; c < n; ++c) a[j][c] += f * a[i][c];
    for (std::size_t r = 0; r < n; ++r) p[r][j] += f * p[r][i];
  };

  Diagonalization out;
  while (!active.empty()) {
    std::vector<std::size_t> candidates;
    for (std::size_t i : active)
      if (sgn(a[i][i]) != 0) candidates.push_back(i);

    if (candidates.empty()) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i : active)
        for (std::size_t j : active)
          if (i != j && sgn(a[i][j]) != 0) pairs.emplace_back(i, j);
      if (pairs.empty()) fail(ErrorKind::Internal, "degenerate remainder in symmetric decomposition");
      auto [i, j] = pairs[pick(pairs.size())];
      add_column(i, j, Rational(1));
      continue;
    }

    const std::size_t piv = candidates[pick(candidates.size())];
    for (std::size_t j : active) {
      if (j == piv || sgn(a[j][piv]) == 0) continue;
      Rational f = -a[j][piv] / a[piv][piv];
      add_column(j, piv, f);
    }
    std::vector<Rational> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = p[r][piv];
    out.basis.push_back(std::move(col));
    out.diagonal.push_back(a[piv][piv]);
    active.erase(std::find(active.begin(), active.end(), piv));
  }
  return out;
}

Inertia inertia(const Lattice& l) {
  Inertia in;
  for (const auto& d : diagonalize(l).diagonal) {
    if (sgn(d) > 0)
      ++in.b_plus;
    else if (sgn(d) < 0)
      ++in.b_minus;
    else
      fail(ErrorKind::Internal, "zero pivot in nondegenerate form");
  }
  in.signature = in.b_plus - in.b_minus;
  return in;
}

Parity parity(const Lattice& l) {
  for (std::size_t i = 0; i < l.rank(); ++i)
    if (l.gram()(i, i) % 2 != 0) return Parity::Odd;
  return Parity::Even;
}

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

bool is_characteristic(const Lattice& l, const LatticeVector& v) {
  require(v.size() == l.rank(), ErrorKind::InvalidInput,
          "characteristic test: vector length " + std::to_string(v.size()) + " does not match rank " +
              std::to_string(l.rank()));
  for (std::size_t i = 0; i < l.rank(); ++i) {
    Int vx = 0;
    for (std::size_t c = 0; c < l.rank(); ++c) vx += v[c] * l.gram()(c, i);
    if (((vx - l.gram()(i, i)) % 2) != 0) return false;
  }
  return true;
}

bool is_isometry(const Lattice& l, const LatticeMap& m) {
  require(m.matrix.rows() == l.rank() && m.matrix.cols() == l.rank(), ErrorKind::InvalidInput,
          "lattice map shape does not match rank " + std::to_string(l.rank()));
  return m.matrix.transpose() * l.gram() * m.matrix == l.gram();
}

int positive_orientation_sign(const Lattice& l, const LatticeMap& m, std::optional<std::uint64_t> pivot_seed) {
  require(is_isometry(l, m), ErrorKind::Hypothesis, "positive_orientation_sign: map is not an isometry");
  const std::size_t n = l.rank();
  Diagonalization d = diagonalize(l, pivot_seed);
  std::vector<std::size_t> pos;
  for (std::size_t k = 0; k < n; ++k)
    if (sgn(d.diagonal[k]) > 0) pos.push_back(k);
  if (pos.empty()) return 1;

  RatMatrix basis(n, std::vector<Rational>(n));  // columns are d.basis
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t r = 0; r < n; ++r) basis[r][k] = d.basis[k][r];

  RatMatrix projected(pos.size(), std::vector<Rational>(pos.size()));
  for (std::size_t a = 0; a < pos.size(); ++a) {
    const auto& v = d.basis[pos[a]];
    std::vector<Rational> image(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) image[r] += Rational(static_cast<long>(m.matrix(r, c))) * v[c];
    std::vector<Rational> coords = solve(basis, image);
    for (std::size_t b = 0; b < pos.size(); ++b) projected[b][a] = coords[pos[b]];
  }
  Rational det = det_in_place(projected);
  if (sgn(det) == 0) fail(ErrorKind::InvalidInput, "degenerate projection");
  return sgn(det) > 0 ? 1 : -1;
}

LatticeMap compose(const LatticeMap& a, const LatticeMap& b) { return LatticeMap{a.matrix * b.matrix}; }

LatticeMap embed_block(std::size_t rank, std::size_t offset, const IntMatrix& block) {
  require(block.rows() == block.cols() && offset + block.rows() <= rank, ErrorKind::InvalidInput,
          "block does not fit into lattice of rank " + std::to_string(rank));
  IntMatrix m = IntMatrix::identity(rank);
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c) m(offset + r, offset + c) = block(r, c);
  return LatticeMap{m};
}

}  // namespace famclass::lattice

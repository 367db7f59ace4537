#pragma once

// Integral symmetric bilinear forms: the intersection lattice H^2(X;Z)/torsion
// of a closed oriented 4-manifold together with the cup-product pairing.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace famclass::lattice {

using Int = std::int64_t;
using Rational = mpq_class;

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, Int fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  std::vector<std::vector<Int>> to_rows() const;
  bool is_symmetric() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Exact determinant by fraction-free rational elimination.
Rational determinant(const IntMatrix& m);

/// Coordinates of a class in the lattice basis.
using LatticeVector = std::vector<Int>;

/// Induced action f^* on H^2/torsion, written in the lattice basis.
struct LatticeMap {
  IntMatrix matrix;
};

enum class BlockType { H, E8, Diag, Custom };

/// One summand of a lattice presentation. `sign` negates H and E8 blocks.
struct Block {
  BlockType type = BlockType::H;
  int sign = 1;
  std::vector<Int> entries;  // Diag
  IntMatrix gram;            // Custom
};

Block hyperbolic(int sign = 1);
Block e8(int sign = 1);
Block diagonal(std::vector<Int> entries);
Block custom(IntMatrix gram);

/// Gram matrix of the standard E8 form (Cartan matrix, positive definite, det 1).
IntMatrix e8_gram();

class Lattice {
 public:
  /// Validates symmetry and nondegeneracy of the assembled form.
  explicit Lattice(IntMatrix gram);

  std::size_t rank() const { return gram_.rows(); }
  const IntMatrix& gram() const { return gram_; }
  /// Block presentation, if the lattice was built from blocks.
  const std::vector<Block>& blocks() const { return blocks_; }

  Int pair(const LatticeVector& u, const LatticeVector& v) const;
  Int square(const LatticeVector& u) const { return pair(u, u); }

 private:
  friend Lattice build_lattice(const std::vector<Block>& blocks);
  friend Lattice direct_sum(const Lattice& a, const Lattice& b);

  IntMatrix gram_;
  std::vector<Block> blocks_;
};

/// Block-diagonal direct sum in the given order. Throws naming the offending block.
Lattice build_lattice(const std::vector<Block>& blocks);

Lattice direct_sum(const Lattice& a, const Lattice& b);

/// `copies` orthogonal copies of `l`.
Lattice repeat(const Lattice& l, int copies);

struct Inertia {
  int b_plus = 0;
  int b_minus = 0;
  int signature = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Congruence diagonalisation P^T G P = D over Q.
struct Diagonalization {
  std::vector<std::vector<Rational>> basis;  // columns of P
  std::vector<Rational> diagonal;            // entries of D
};

/// Symmetric rational LDL^T with symmetric pivoting. With `pivot_seed`, the pivot
/// among admissible candidates is chosen pseudo-randomly (used to probe basis
/// independence of derived quantities).
Diagonalization diagonalize(const Lattice& l, std::optional<std::uint64_t> pivot_seed = std::nullopt);

Inertia inertia(const Lattice& l);

enum class Parity { Even, Odd };
Parity parity(const Lattice& l);
std::string to_string(Parity p);

bool is_characteristic(const Lattice& l, const LatticeVector& v);

bool is_isometry(const Lattice& l, const LatticeMap& m);

/// Sign of the action of an isometry on the orientation of a maximal positive
/// definite subspace. Exact; does not depend on the subspace chosen.
int positive_orientation_sign(const Lattice& l, const LatticeMap& m,
                              std::optional<std::uint64_t> pivot_seed = std::nullopt);

LatticeMap compose(const LatticeMap& a, const LatticeMap& b);

/// Map acting by `block` on coordinates [offset, offset + block.rows()) and identity elsewhere.
LatticeMap embed_block(std::size_t rank, std::size_t offset, const IntMatrix& block);

}  // namespace famclass::lattice

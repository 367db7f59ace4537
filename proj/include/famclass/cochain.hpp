#pragma once

// Finite cell complexes (cubes, tori, raw incidence data) and cellular cochains
// over Z or F2.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "famclass/lattice.hpp"
#include "famclass/ring.hpp"

namespace famclass::cochain {

using lattice::Int;
using lattice::IntMatrix;

/// Cube-type cells carry a pattern per ambient coordinate: -1 for a free
/// coordinate ('*' in the id), otherwise the fixed value 0 or 1.
struct Cell {
  std::string id;
  int dim = 0;
  std::vector<int> pattern;

  std::vector<int> free_axes() const;
};

class CellComplex {
 public:
  /// cells[k] lists the k-cells; boundary[k] (k >= 1) is the integer matrix of
  /// the cellular boundary C_k -> C_{k-1}. Validates shapes, unique ids and d^2 = 0.
  CellComplex(std::vector<std::vector<Cell>> cells, std::vector<IntMatrix> boundary, std::string name = "custom");

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(cells_.size()) - 1; }
  std::size_t count(int k) const;
  const std::vector<Cell>& cells(int k) const;
  const Cell& cell(int k, std::size_t index) const { return cells(k).at(index); }
  /// (dimension, index) of a cell id.
  std::pair<int, std::size_t> locate(const std::string& id) const;
  /// Boundary C_k -> C_{k-1}; an empty (0 x count(k)) matrix for k = 0.
  const IntMatrix& boundary(int k) const { return boundary_.at(k); }

 private:
  std::string name_;
  std::vector<std::vector<Cell>> cells_;
  std::vector<IntMatrix> boundary_;
  std::map<std::string, std::pair<int, std::size_t>> index_;
};

using ComplexPtr = std::shared_ptr<const CellComplex>;

/// Cubical T^n: one cell per subset of coordinates, all others fixed at 0.
ComplexPtr build_torus(int n);
/// [0,1]^n with its 3^n faces.
ComplexPtr build_cube(int n);
/// Circle subdivided into m vertices and m edges.
ComplexPtr build_circle(int m);
/// A single point.
ComplexPtr build_point();

struct CellCochain {
  ComplexPtr complex;
  int degree = 0;
  Ring ring = Ring::F2;
  std::vector<Int> values;  // indexed like complex->cells(degree)

  Int at(const std::string& id) const;
  bool is_zero() const;
};

CellCochain zero_cochain(ComplexPtr complex, int degree, Ring ring);
CellCochain make_cochain(ComplexPtr complex, int degree, Ring ring, std::vector<Int> values);

CellCochain coboundary(const CellCochain& c);
bool is_cocycle(const CellCochain& c);
CellCochain add(const CellCochain& a, const CellCochain& b, Int scale_b = 1);

/// Whether c1 - c2 is a coboundary. Both must be cocycles.
bool cohomologous(const CellCochain& c1, const CellCochain& c2);

/// Sum of orientation[i] * c(top cell i). Default orientation is +1 on every top
/// cell; the oriented sum of top cells must be a cycle.
Int pair_fundamental(const CellCochain& c, const std::vector<int>& orientation = {});

/// The characteristic cochain e -> count(e) on the `degree`-cells.
CellCochain class_from_cell_counts(ComplexPtr complex, int degree, const std::map<std::string, Int>& counts, Ring ring);

/// Betti numbers b_0 .. b_dim (free rank over Z, dimension over F2).
std::vector<int> betti_numbers(const CellComplex& complex, Ring ring);

/// Smith normal form D = U A V with U, V unimodular.
struct SmithForm {
  IntMatrix u, d, v;
};
SmithForm smith_normal_form(const IntMatrix& a);

/// Integer solution of A x = b, if one exists.
std::optional<std::vector<Int>> solve_integer(const IntMatrix& a, const std::vector<Int>& b);

int rank_f2(const IntMatrix& a);

/// Chain map between complexes: chain[k] sends source k-chains to target k-chains.
struct CellularMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<IntMatrix> chain;
};

/// Validates d f = f d.
void check_chain_map(const CellularMap& f);

CellCochain pullback(const CellularMap& f, const CellCochain& c);

/// The k-fold covering of a circle with m edges by a circle with k*m edges.
CellularMap circle_cover(int edges, int degree);

/// Degree-k self map of the one-cell torus T^1.
CellularMap torus1_degree_map(int degree);

}  // namespace famclass::cochain

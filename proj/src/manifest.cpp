#include "famclass/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "famclass/error.hpp"
#include "famclass/expr.hpp"
#include "famclass/toy_families.hpp"

namespace famclass::manifest {

namespace {

using lattice::Block;
using lattice::BlockType;
using lattice::IntMatrix;

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::InvalidInput, "manifest: " + what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + " is missing \"" + key + "\"");
  return j.at(key);
}

Int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + " must be an integer");
  return j.get<Int>();
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + " must be a string");
  return j.get<std::string>();
}

std::vector<Int> int_vector(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array");
  std::vector<Int> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_int(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

vn::Mat real_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where + " must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  vn::Mat m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) bad(where + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = as_double(j[r][c], where);
  }
  return m;
}

int copies_of(const json& j, const std::string& where) {
  if (!j.contains("copies")) return 1;
  const Int k = as_int(j.at("copies"), where + ".copies");
  if (k < 1) bad(where + ".copies must be positive");
  return static_cast<int>(k);
}

Block block_from_json(const json& j, const std::string& where) {
  const std::string type = as_string(field(j, "type", where), where + ".type");
  const int sign = j.contains("sign") ? static_cast<int>(as_int(j.at("sign"), where + ".sign")) : 1;
  if (type == "H") return lattice::hyperbolic(sign);
  if (type == "E8") return lattice::e8(sign);
  if (type == "diag") return lattice::diagonal(int_vector(field(j, "entries", where), where + ".entries"));
  if (type == "custom") return lattice::custom(matrix_from_json(field(j, "gram", where)));
  bad(where + ": unknown block type " + type);
}

json block_to_json(const Block& b) {
  switch (b.type) {
    case BlockType::H:
      return b.sign == 1 ? json{{"type", "H"}} : json{{"type", "H"}, {"sign", b.sign}};
    case BlockType::E8:
      return b.sign == 1 ? json{{"type", "E8"}} : json{{"type", "E8"}, {"sign", b.sign}};
    case BlockType::Diag:
      return {{"type", "diag"}, {"entries", b.entries}};
    case BlockType::Custom:
      return {{"type", "custom"}, {"gram", matrix_to_json(b.gram)}};
  }
  fail(ErrorKind::Internal, "unknown block type");
}

lattice::LatticeVector lattice_vector(const json& j, std::size_t rank, const std::string& where) {
  auto v = int_vector(j, where);
  if (v.size() != rank)
    bad(where + " has length " + std::to_string(v.size()) + ", lattice rank is " + std::to_string(rank));
  return v;
}

vn::BaseKind base_kind(const std::string& s) {
  if (s == "point") return vn::BaseKind::Point;
  if (s == "cube") return vn::BaseKind::Cube;
  if (s == "torus") return vn::BaseKind::Torus;
  bad("unknown base kind " + s);
}

std::vector<double> to_std(const vn::Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<Int>()));
  if (j.is_number_float()) return Rational(j.get<double>());
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0) bad("not a rational: " + j.get<std::string>());
    if (q.get_den() == 0) bad("zero denominator in " + j.get<std::string>());
    q.canonicalize();
    return q;
  }
  bad("expected a rational, got " + j.dump());
}

json rational_to_json(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1 && c.get_num().fits_slong_p()) return static_cast<Int>(c.get_num().get_si());
  return c.get_str();
}

IntMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a nonempty array of rows");
  std::vector<std::vector<Int>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    rows.push_back(int_vector(j[r], "matrix row " + std::to_string(r)));
    if (rows.back().size() != rows.front().size()) bad("matrix has ragged rows");
  }
  return IntMatrix::from_rows(rows);
}

json matrix_to_json(const IntMatrix& m) { return m.to_rows(); }

lattice::Lattice lattice_from_json(const json& j) {
  const json& blocks = field(j, "blocks", "lattice");
  if (!blocks.is_array()) bad("lattice.blocks must be an array");
  std::vector<Block> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string where = "lattice.blocks[" + std::to_string(i) + "]";
    const Block b = block_from_json(blocks[i], where);
    for (int k = copies_of(blocks[i], where); k > 0; --k) out.push_back(b);
  }
  return lattice::build_lattice(out);
}

json lattice_to_json(const lattice::Lattice& l) {
  json blocks = json::array();
  for (const Block& b : l.blocks()) blocks.push_back(block_to_json(b));
  return {{"blocks", blocks}};
}

fourman::FourManifold builtin_manifold(const std::string& name) {
  if (name == "k3") return fourman::k3();
  if (name == "s2xs2") return fourman::s2xs2();
  if (name == "cp2") return fourman::cp2();
  if (name == "cp2bar") return fourman::cp2bar();
  if (name == "cp2#2cp2bar") return fourman::cp2_2cp2bar();
  bad("unknown built-in manifold " + name);
}

std::vector<std::string> builtin_manifold_names() { return {"k3", "s2xs2", "cp2", "cp2bar", "cp2#2cp2bar"}; }

fourman::FourManifold manifold_from_json(const json& j) {
  if (j.is_string()) return builtin_manifold(j.get<std::string>());
  if (!j.is_object()) bad("manifold must be an object");
  fourman::FourManifold x = [&] {
    if (j.contains("builtin")) return builtin_manifold(as_string(j.at("builtin"), "manifold.builtin"));
    if (j.contains("sum")) {
      const json& parts = j.at("sum");
      if (!parts.is_array() || parts.empty()) bad("manifold.sum must be a nonempty array");
      std::optional<fourman::FourManifold> acc;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const fourman::FourManifold part = manifold_from_json(parts[i]);
        const int k = parts[i].is_object() ? copies_of(parts[i], "manifold.sum[" + std::to_string(i) + "]") : 1;
        for (int c = 0; c < k; ++c) acc = acc ? fourman::connected_sum(*acc, part) : part;
      }
      return *acc;
    }
    const Int b1 = j.contains("b1") ? as_int(j.at("b1"), "manifold.b1") : 0;
    if (b1 < 0) bad("manifold.b1 must be nonnegative");
    return fourman::FourManifold{j.value("name", std::string("X")), static_cast<int>(b1),
                                 lattice_from_json(field(j, "lattice", "manifold"))};
  }();
  if (j.contains("name")) x.name = as_string(j.at("name"), "manifold.name");
  return x;
}

json manifold_to_json(const fourman::FourManifold& x) {
  return {{"name", x.name}, {"b1", x.b1}, {"lattice", lattice_to_json(x.lattice)}};
}

std::optional<fourman::AuxClass> aux_from_json(const json& entry, std::size_t rank) {
  const bool has_spinc = entry.contains("spinc");
  const bool has_so3 = entry.contains("so3");
  if (has_spinc && has_so3) bad("entry carries both spinc and so3 classes");
  if (has_spinc) return fourman::SpinC{lattice_vector(field(entry.at("spinc"), "c1", "spinc"), rank, "spinc.c1")};
  if (has_so3) {
    const json& p = entry.at("so3");
    fourman::SO3 so3;
    so3.p1 = as_int(field(p, "p1", "so3"), "so3.p1");
    for (Int w : lattice_vector(field(p, "w2", "so3"), rank, "so3.w2")) so3.w2.push_back(static_cast<int>(reduce(Ring::F2, w)));
    return so3;
  }
  return std::nullopt;
}

json aux_to_json(const fourman::AuxClass& a) {
  if (const auto* s = std::get_if<fourman::SpinC>(&a)) return {{"spinc", {{"c1", s->c1}}}};
  const auto& p = std::get<fourman::SO3>(a);
  return {{"so3", {{"p1", p.p1}, {"w2", p.w2}}}};
}

Diffeo diffeo_from_json(const json& j, std::size_t rank) {
  Diffeo d;
  d.name = as_string(field(j, "name", "diffeo"), "diffeo.name");
  const std::string where = "diffeo " + d.name;
  if (j.contains("block")) {
    const Int offset = j.contains("offset") ? as_int(j.at("offset"), where + ".offset") : 0;
    const IntMatrix block = matrix_from_json(j.at("block"));
    if (offset < 0 || block.rows() != block.cols() || static_cast<std::size_t>(offset) + block.rows() > rank)
      bad(where + ": block does not fit the lattice");
    d.map = lattice::embed_block(rank, static_cast<std::size_t>(offset), block);
  } else if (field(j, "matrix", where).is_string()) {
    if (j.at("matrix").get<std::string>() != "identity") bad(where + ": matrix must be an array or \"identity\"");
    d.map.matrix = IntMatrix::identity(rank);
  } else {
    d.map.matrix = matrix_from_json(j.at("matrix"));
  }
  if (d.map.matrix.rows() != rank || d.map.matrix.cols() != rank)
    bad(where + ": matrix must be " + std::to_string(rank) + "x" + std::to_string(rank));
  if (j.contains("h1_sign")) {
    const Int s = as_int(j.at("h1_sign"), where + ".h1_sign");
    if (s != 1 && s != -1) bad(where + ": h1_sign must be +1 or -1");
    d.h1_sign = static_cast<int>(s);
  }
  return d;
}

cochain::ComplexPtr complex_from_json(const json& j) {
  if (j.is_object() && j.contains("builtin")) {
    const std::string kind = as_string(j.at("builtin"), "complex.builtin");
    if (kind == "point") return cochain::build_point();
    if (kind == "circle") return cochain::build_circle(static_cast<int>(as_int(field(j, "edges", "complex"), "edges")));
    const int n = static_cast<int>(as_int(field(j, "n", "complex"), "complex.n"));
    if (kind == "torus") return cochain::build_torus(n);
    if (kind == "cube") return cochain::build_cube(n);
    bad("unknown built-in complex " + kind);
  }
  const json& cells = field(j, "cells", "complex");
  if (!cells.is_array() || cells.empty()) bad("complex.cells must be a nonempty array");
  std::vector<std::vector<cochain::Cell>> out(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k)
    for (const json& id : cells[k]) out[k].push_back({as_string(id, "cell id"), static_cast<int>(k), {}});
  std::vector<IntMatrix> boundary(cells.size());
  boundary[0] = IntMatrix(0, out[0].size());
  const json& bd = field(j, "boundary", "complex");
  if (!bd.is_array() || bd.size() != cells.size()) bad("complex.boundary needs one entry per dimension");
  for (std::size_t k = 1; k < cells.size(); ++k) {
    if (out[k - 1].empty() || out[k].empty()) {
      boundary[k] = IntMatrix(out[k - 1].size(), out[k].size());
      continue;
    }
    boundary[k] = matrix_from_json(bd[k]);
  }
  return std::make_shared<const cochain::CellComplex>(std::move(out), std::move(boundary), j.value("name", "custom"));
}

json complex_to_json(const cochain::CellComplex& c) {
  const std::string& name = c.name();
  if (name == "point") return {{"builtin", "point"}};
  if (name.size() == 2 && (name[0] == 'T' || name[0] == 'I') && name[1] >= '1' && name[1] <= '4')
    return {{"builtin", name[0] == 'T' ? "torus" : "cube"}, {"n", name[1] - '0'}};
  if (name.rfind("S1[", 0) == 0) return {{"builtin", "circle"}, {"edges", static_cast<int>(c.count(1))}};
  json cells = json::array();
  json boundary = json::array();
  for (int k = 0; k <= c.dim(); ++k) {
    json ids = json::array();
    for (const auto& cell : c.cells(k)) ids.push_back(cell.id);
    cells.push_back(ids);
    boundary.push_back(k == 0 ? json(nullptr) : matrix_to_json(c.boundary(k)));
  }
  return {{"name", c.name()}, {"cells", cells}, {"boundary", boundary}};
}

Ring ring_from_string(const std::string& s) {
  if (s == "Z" || s == "z") return Ring::Z;
  if (s == "F2" || s == "f2") return Ring::F2;
  bad("unknown ring " + s + " (expected z or f2)");
}

cochain::CellCochain cochain_from_json(const json& j) {
  auto complex = complex_from_json(field(j, "complex", "cochain"));
  const int degree = static_cast<int>(as_int(field(j, "degree", "cochain"), "cochain.degree"));
  const Ring ring = ring_from_string(as_string(field(j, "ring", "cochain"), "cochain.ring"));
  if (degree < 0 || degree > complex->dim()) bad("cochain degree out of range");
  const json& values = field(j, "values", "cochain");
  if (!values.is_object()) bad("cochain.values must map cell ids to values");
  std::vector<Int> v(complex->count(degree), 0);
  for (const auto& [id, val] : values.items()) {
    const auto [dim, index] = complex->locate(id);
    if (dim != degree) bad("cell " + id + " has dimension " + std::to_string(dim));
    v[index] = as_int(val, "cochain value for " + id);
  }
  return cochain::make_cochain(complex, degree, ring, std::move(v));
}

json cochain_to_json(const cochain::CellCochain& c) {
  json values = json::object();
  for (std::size_t i = 0; i < c.values.size(); ++i) values[c.complex->cell(c.degree, i).id] = c.values[i];
  return {{"complex", complex_to_json(*c.complex)}, {"degree", c.degree}, {"ring", to_string(c.ring)}, {"values", values}};
}

vn::ToyFredholmFamily family_from_json(const json& j) {
  if (j.is_string()) return vn::toys::builtin(j.get<std::string>());
  if (j.contains("builtin")) return vn::toys::builtin(as_string(j.at("builtin"), "family.builtin"));
  vn::ToyFredholmFamily fam;
  fam.name = j.value("name", std::string("user"));
  const std::string where = "family " + fam.name;
  fam.base = base_kind(j.value("base", std::string("point")));
  fam.base_dim = fam.base == vn::BaseKind::Point ? 0 : static_cast<int>(as_int(field(j, "base_dim", where), where + ".base_dim"));
  fam.fiber_dim = static_cast<int>(as_int(field(j, "fiber_dim", where), where + ".fiber_dim"));
  fam.radius = as_double(field(j, "radius", where), where + ".radius");
  if (j.contains("s_min")) fam.s_min = as_double(j.at("s_min"), where + ".s_min");
  const json& comps = field(j, "components", where);
  if (!comps.is_array() || comps.empty()) bad(where + ".components must be a nonempty array");
  std::vector<expr::Expression> exprs;
  for (const json& c : comps) {
    exprs.push_back(expr::Expression::parse(as_string(c, where + ".components")));
    if (exprs.back().fiber_arity() > fam.fiber_dim)
      bad(where + ": component " + c.get<std::string>() + " uses a fiber coordinate beyond fiber_dim");
    if (exprs.back().base_arity() > fam.base_dim)
      bad(where + ": component " + c.get<std::string>() + " uses a base coordinate beyond base_dim");
  }
  fam.target_dim = static_cast<int>(exprs.size());
  fam.section = [exprs](const vn::Vec& b, const vn::Vec& x) {
    const auto xs = to_std(x);
    const auto bs = to_std(b);
    vn::Vec s(static_cast<Eigen::Index>(exprs.size()));
    for (std::size_t i = 0; i < exprs.size(); ++i) s[static_cast<Eigen::Index>(i)] = exprs[i].eval(xs, bs);
    return s;
  };
  if (j.contains("monodromy")) {
    for (const json& t : j.at("monodromy"))
      fam.monodromy.push_back({real_matrix(field(t, "fiber", where), where + ".monodromy.fiber"),
                               real_matrix(field(t, "target", where), where + ".monodromy.target")});
  }
  vn::validate_family(fam);
  return fam;
}

wall::BoundLedger ledger_from_json(const json& j) {
  wall::BoundLedger l;
  const json& constants = field(j, "constants", "ledger");
  if (!constants.is_object()) bad("ledger.constants must be an object");
  for (const auto& [name, v] : constants.items()) l.constants[name] = as_double(v, "ledger constant " + name);
  l.T = as_double(field(j, "T", "ledger"), "ledger.T");
  for (const json& t : field(j, "Ti", "ledger")) l.Ti.push_back(as_double(t, "ledger.Ti"));
  for (const json& b : field(j, "baselines", "ledger")) l.baselines.push_back(rational_from_json(b));
  return l;
}

json ledger_to_json(const wall::BoundLedger& l) {
  json baselines = json::array();
  for (const auto& b : l.baselines) baselines.push_back(rational_to_json(b));
  return {{"constants", l.constants}, {"T", l.T}, {"Ti", l.Ti}, {"baselines", baselines}};
}

WallSetup wall_from_json(const json& j) {
  WallSetup setup;
  const std::string type = j.value("type", std::string("reflection"));
  if (j.contains("subdivision")) {
    const json& s = j.at("subdivision");
    setup.options.initial_subdivision = static_cast<int>(s.value("initial", Int{2}));
    setup.options.max_subdivision = static_cast<int>(s.value("max", Int{64}));
    setup.options.min_levels = static_cast<int>(s.value("min_levels", Int{2}));
  }
  if (type == "reflection") {
    const int n = static_cast<int>(as_int(field(j, "n", "wall"), "wall.n"));
    if (n < 1) bad("wall.n must be positive");
    std::vector<IntMatrix> f_star(n, wall::h_reflection());
    if (j.contains("f_star")) {
      const json& fs = j.at("f_star");
      if (!fs.is_array() || fs.size() != static_cast<std::size_t>(n)) bad("wall.f_star needs one 2x2 block per summand");
      for (int i = 0; i < n; ++i) f_star[i] = matrix_from_json(fs[i]);
    }
    if (j.contains("ledger")) setup.ledger = ledger_from_json(j.at("ledger"));
    setup.family = wall::reflection_family(n, f_star, setup.ledger);
    return setup;
  }
  if (type != "custom") bad("unknown wall type " + type);
  wall::WallFamily fam;
  fam.lattice = lattice_from_json(field(j, "lattice", "wall"));
  for (const json& g : field(j, "gammas", "wall"))
    fam.gammas.push_back(lattice_vector(g, fam.lattice.rank(), "wall.gammas"));
  fam.n = static_cast<int>(fam.gammas.size());
  if (fam.n < 1) bad("wall.gammas must be nonempty");
  std::vector<expr::Expression> exprs;
  for (const json& c : field(j, "sigma", "wall")) {
    exprs.push_back(expr::Expression::parse(as_string(c, "wall.sigma")));
    if (exprs.back().fiber_arity() > 0) bad("wall.sigma components may only use b0..b(n-1)");
    if (exprs.back().base_arity() > fam.n) bad("wall.sigma uses a parameter beyond n");
  }
  if (exprs.size() != fam.lattice.rank()) bad("wall.sigma needs one component per lattice coordinate");
  fam.sigma = wall::exact_sigma([exprs](const std::vector<double>& t) {
    std::vector<double> out;
    for (const auto& e : exprs) out.push_back(e.eval({}, t));
    return out;
  });
  fam.description = j.value("description", std::string("custom wall family"));
  setup.family = std::move(fam);
  return setup;
}

wall::CompositionTable composition_from_json(const json& j) {
  wall::CompositionTable t;
  t.n = static_cast<int>(as_int(field(j, "n", "composition"), "composition.n"));
  if (t.n < 1) bad("composition.n must be positive");
  const json& values = field(j, "values", "composition");
  if (values.is_array()) {
    for (std::size_t k = 0; k < values.size(); ++k) t.values[static_cast<int>(k)] = as_int(values[k], "composition value");
  } else if (values.is_object()) {
    for (const auto& [key, v] : values.items()) {
      int k = 0;
      std::istringstream in(key);
      if (!(in >> k) || !in.eof()) bad("composition key " + key + " is not an integer");
      t.values[k] = as_int(v, "composition value " + key);
    }
  } else {
    bad("composition.values must be an array or an object");
  }
  return t;
}

json composition_to_json(const wall::CompositionTable& t) {
  json values = json::object();
  for (const auto& [k, v] : t.values) values[std::to_string(k)] = v;
  return {{"n", t.n}, {"values", values}};
}

const ManifoldEntry& Manifest::manifold(const std::string& name) const {
  auto it = manifolds.find(name);
  if (it == manifolds.end()) bad("unknown manifold " + name);
  return it->second;
}

const BaseInvariant& Manifest::invariant(const std::string& name) const {
  auto it = base_invariants.find(name);
  if (it == base_invariants.end()) bad("unknown base invariant " + name);
  return it->second;
}

Manifest parse_manifest(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  static const std::set<std::string> known = {"manifolds", "base_invariants", "families",       "walls",
                                              "cochains",  "composition",     "scenarios",      "decompositions",
                                              "psc",       "commands",        "description"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) bad("unknown top-level key " + key);

  Manifest m;
  const json manifolds_section = j.value("manifolds", json::object());
  for (const auto& [name, entry] : manifolds_section.items()) {
    ManifoldEntry e{manifold_from_json(field(entry, "manifold", "manifolds." + name)), std::nullopt, {}};
    if (!entry.at("manifold").contains("name")) e.manifold.name = name;
    e.aux = aux_from_json(entry, e.manifold.lattice.rank());
    for (const json& d : entry.value("diffeos", json::array()))
      e.diffeos.push_back(diffeo_from_json(d, e.manifold.lattice.rank()));
    m.manifolds.emplace(name, std::move(e));
  }
  const json base_invariants_section = j.value("base_invariants", json::object());
  for (const auto& [name, inv] : base_invariants_section.items()) {
    BaseInvariant b;
    b.value = as_int(field(inv, "value", "base_invariants." + name), "base_invariants." + name + ".value");
    b.provenance = inv.value("provenance", std::string());
    if (b.provenance.empty()) bad("base invariant " + name + " carries no provenance");
    m.base_invariants.emplace(name, std::move(b));
  }
  const json families_section = j.value("families", json::object());
  for (const auto& [name, fam] : families_section.items()) {
    family_from_json(fam);
    m.families.emplace(name, fam);
  }
  const json walls_section = j.value("walls", json::object());
  for (const auto& [name, w] : walls_section.items()) {
    wall_from_json(w);
    m.walls.emplace(name, w);
  }
  const json cochains_section = j.value("cochains", json::object());
  for (const auto& [name, c] : cochains_section.items()) {
    cochain_from_json(c);
    m.cochains.emplace(name, c);
  }
  if (j.contains("composition")) m.composition = composition_from_json(j.at("composition"));
  for (const json& s : j.value("scenarios", json::array())) {
    as_string(field(s, "name", "scenario"), "scenario.name");
    m.scenarios.push_back(s);
  }
  for (const json& d : j.value("decompositions", json::array())) {
    Decomposition dec;
    dec.name = d.value("name", std::string("split"));
    for (const json& p : field(d, "parts", "decomposition " + dec.name)) dec.parts.push_back(manifold_from_json(p));
    if (dec.parts.size() < 2) bad("decomposition " + dec.name + " needs at least two parts");
    m.decompositions.push_back(std::move(dec));
  }
  if (j.contains("psc")) {
    const json& p = field(j.at("psc"), "nonempty", "psc");
    if (!p.is_boolean()) bad("psc.nonempty must be a boolean");
    m.psc_nonempty = p.get<bool>();
  }
  for (const json& c : j.value("commands", json::array())) {
    as_string(field(c, "run", "command"), "command.run");
    m.commands.push_back(c);
  }

  // Every name referenced by scenarios and commands must resolve.
  auto check_refs = [&m](const json& req, const std::string& where) {
    for (const char* key : {"manifold", "other"})
      if (req.contains(key) && req.at(key).is_string()) {
        const std::string name = req.at(key).get<std::string>();
        const auto builtins = builtin_manifold_names();
        if (!m.manifolds.count(name) && std::find(builtins.begin(), builtins.end(), name) == builtins.end())
          bad(where + " references unknown manifold " + name);
      }
    for (const char* key : {"sw", "sw_m0", "sw_m1", "donaldson"})
      if (req.contains(key) && req.at(key).is_string() && !m.base_invariants.count(req.at(key).get<std::string>()))
        bad(where + " references unknown base invariant " + req.at(key).get<std::string>());
    if (req.contains("wall") && req.at("wall").is_string() && !m.walls.count(req.at("wall").get<std::string>()))
      bad(where + " references unknown wall " + req.at("wall").get<std::string>());
    if (req.contains("cochain") && req.at("cochain").is_string() && !m.cochains.count(req.at("cochain").get<std::string>()))
      bad(where + " references unknown cochain " + req.at("cochain").get<std::string>());
    if (req.contains("family") && req.at("family").is_string()) {
      const std::string name = req.at("family").get<std::string>();
      if (!m.families.count(name)) vn::toys::builtin(name);
    }
  };
  for (const json& s : m.scenarios) check_refs(s, "scenario " + s.at("name").get<std::string>());
  for (const json& c : m.commands) check_refs(c, "command " + c.at("run").get<std::string>());
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path + ": " + e.what());
  }
  return parse_manifest(j);
}

}  // namespace famclass::manifest

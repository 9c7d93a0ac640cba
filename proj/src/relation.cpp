#include "stabkit/relation.hpp"

#include <unordered_map>

namespace stabkit {

namespace {

Bits indices_to_bits(int n, const std::vector<int>& idx, const char* what) {
  Bits b(n);
  for (int i : idx) {
    if (i < 0 || i >= n)
      throw ValidationError(std::string(what) + " index " + std::to_string(i) +
                            " out of range [0," + std::to_string(n) + ")");
    b.set(i);
  }
  return b;
}

}  // namespace

AmbientRelation make_relation(int u_x, int u_y, const std::vector<Bits>& rows,
                              const std::vector<int>& m_x,
                              const std::vector<int>& m_y) {
  if (u_x <= 0 || u_y <= 0)
    throw ValidationError("relation sizes must be positive");
  if (int(rows.size()) != u_x)
    throw ValidationError("expected " + std::to_string(u_x) + " rows, got " +
                          std::to_string(rows.size()));
  AmbientRelation rel;
  rel.u_x = u_x;
  rel.u_y = u_y;
  rel.row = rows;
  for (const Bits& r : rel.row)
    if (r.size() != u_y)
      throw ValidationError("row width " + std::to_string(r.size()) +
                            " does not match u_y=" + std::to_string(u_y));
  rel.col.assign(u_y, Bits(u_x));
  for (int a = 0; a < u_x; ++a)
    rel.row[a].for_each([&](int b) { rel.col[b].set(a); });
  rel.m_x = indices_to_bits(u_x, m_x, "m_x");
  rel.m_y = indices_to_bits(u_y, m_y, "m_y");
  if (rel.m_x.none()) throw ValidationError("m_x must be nonempty");
  if (rel.m_y.none()) throw ValidationError("m_y must be nonempty");
  return rel;
}

AmbientRelation make_relation(const std::vector<std::string>& rows,
                              const std::vector<int>& m_x,
                              const std::vector<int>& m_y) {
  if (rows.empty()) throw ValidationError("relation needs at least one row");
  int u_y = int(rows[0].size());
  std::vector<Bits> bs;
  bs.reserve(rows.size());
  for (const auto& s : rows) {
    Bits b(u_y);
    if (int(s.size()) != u_y)
      throw ValidationError("row width " + std::to_string(s.size()) +
                            " does not match u_y=" + std::to_string(u_y));
    for (int j = 0; j < u_y; ++j) {
      if (s[j] == '1')
        b.set(j);
      else if (s[j] != '0')
        throw ValidationError(std::string("non-binary matrix entry '") + s[j] +
                              "'");
    }
    bs.push_back(std::move(b));
  }
  return make_relation(int(rows.size()), u_y, bs, m_x, m_y);
}

AmbientRelation make_relation(const std::vector<std::string>& rows) {
  if (rows.empty()) throw ValidationError("relation needs at least one row");
  std::vector<int> mx(rows.size()), my(rows[0].size());
  for (size_t i = 0; i < mx.size(); ++i) mx[i] = int(i);
  for (size_t j = 0; j < my.size(); ++j) my[j] = int(j);
  return make_relation(rows, mx, my);
}

AmbientRelation opposite(const AmbientRelation& rel) {
  AmbientRelation o;
  o.u_x = rel.u_y;
  o.u_y = rel.u_x;
  o.row = rel.col;
  o.col = rel.row;
  o.m_x = rel.m_y;
  o.m_y = rel.m_x;
  return o;
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

namespace {

int ground_size(const AmbientRelation& rel, Side side) {
  return side == Side::phi ? rel.u_x : rel.u_y;
}

const Bits& param_set(const AmbientRelation& rel, Side side) {
  return side == Side::phi ? rel.m_y : rel.m_x;
}

// Extension of a single atom: the column (phi side) or row (opp side).
const Bits& atom_extension(const AmbientRelation& rel, Side side, int param) {
  return side == Side::phi ? rel.col[param] : rel.row[param];
}

void check_atom(const AmbientRelation& rel, Side side, int param) {
  const Bits& ps = param_set(rel, side);
  if (param < 0 || param >= ps.size() || !ps.test(param))
    throw ValidationError("formula atom " + std::to_string(param) +
                          " is not a sub-model parameter on the " +
                          side_name(side) + " side");
}

FormulaNode negate_node(const FormulaNode& n) {
  FormulaNode r;
  switch (n.kind) {
    case FormulaNode::True:
      r.kind = FormulaNode::False;
      break;
    case FormulaNode::False:
      r.kind = FormulaNode::True;
      break;
    case FormulaNode::Atom:
      r.kind = FormulaNode::NotAtom;
      r.atom = n.atom;
      break;
    case FormulaNode::NotAtom:
      r.kind = FormulaNode::Atom;
      r.atom = n.atom;
      break;
    case FormulaNode::And:
    case FormulaNode::Or:
      r.kind = n.kind == FormulaNode::And ? FormulaNode::Or : FormulaNode::And;
      r.kids.reserve(n.kids.size());
      for (const auto& k : n.kids) r.kids.push_back(negate_node(k));
      break;
  }
  return r;
}

}  // namespace

Formula f_true(const AmbientRelation& rel, Side side) {
  Formula f;
  f.side = side;
  f.root.kind = FormulaNode::True;
  f.extension = Bits::all(ground_size(rel, side));
  return f;
}

Formula f_false(const AmbientRelation& rel, Side side) {
  Formula f;
  f.side = side;
  f.root.kind = FormulaNode::False;
  f.extension = Bits(ground_size(rel, side));
  return f;
}

Formula f_atom(const AmbientRelation& rel, Side side, int param) {
  check_atom(rel, side, param);
  Formula f;
  f.side = side;
  f.root.kind = FormulaNode::Atom;
  f.root.atom = param;
  f.extension = atom_extension(rel, side, param);
  return f;
}

Formula f_and(const AmbientRelation&, const Formula& a, const Formula& b) {
  if (a.side != b.side) throw ValidationError("AND of mixed-side formulas");
  Formula f;
  f.side = a.side;
  f.root.kind = FormulaNode::And;
  f.root.kids = {a.root, b.root};
  f.extension = a.extension & b.extension;
  return f;
}

Formula f_or(const AmbientRelation&, const Formula& a, const Formula& b) {
  if (a.side != b.side) throw ValidationError("OR of mixed-side formulas");
  Formula f;
  f.side = a.side;
  f.root.kind = FormulaNode::Or;
  f.root.kids = {a.root, b.root};
  f.extension = a.extension | b.extension;
  return f;
}

Formula f_not(const AmbientRelation&, const Formula& f) {
  Formula r;
  r.side = f.side;
  r.root = negate_node(f.root);
  r.extension = f.extension.flipped();
  return r;
}

Bits eval_formula(const AmbientRelation& rel, Side side,
                  const FormulaNode& n) {
  int g = ground_size(rel, side);
  switch (n.kind) {
    case FormulaNode::True:
      return Bits::all(g);
    case FormulaNode::False:
      return Bits(g);
    case FormulaNode::Atom:
      check_atom(rel, side, n.atom);
      return atom_extension(rel, side, n.atom);
    case FormulaNode::NotAtom:
      check_atom(rel, side, n.atom);
      return atom_extension(rel, side, n.atom).flipped();
    case FormulaNode::And: {
      Bits acc = Bits::all(g);
      for (const auto& k : n.kids) acc &= eval_formula(rel, side, k);
      return acc;
    }
    case FormulaNode::Or: {
      Bits acc(g);
      for (const auto& k : n.kids) acc |= eval_formula(rel, side, k);
      return acc;
    }
  }
  return Bits(g);
}

// ---------------------------------------------------------------------------
// Algebra atoms
// ---------------------------------------------------------------------------

std::vector<AlgebraAtom> atoms_of_algebra(const AmbientRelation& rel,
                                          Side side) {
  const Bits& params = param_set(rel, side);
  int ground = ground_size(rel, side);
  const std::vector<Bits>& lines = side == Side::phi ? rel.row : rel.col;

  std::vector<AlgebraAtom> atoms;
  std::unordered_map<Bits, int, BitsHash> seen;
  for (int e = 0; e < ground; ++e) {
    Bits trace = lines[e] & params;
    auto it = seen.find(trace);
    if (it == seen.end()) {
      seen.emplace(trace, int(atoms.size()));
      AlgebraAtom at;
      at.signature = trace;
      at.extension = Bits(ground);
      at.extension.set(e);
      atoms.push_back(std::move(at));
    } else {
      atoms[it->second].extension.set(e);
    }
  }
  return atoms;
}

std::vector<AlgebraAtom> atoms_of_phi_algebra(const AmbientRelation& rel) {
  return atoms_of_algebra(rel, Side::phi);
}

Formula formula_of_atom_signatures(const AmbientRelation& rel, Side side,
                                   const std::vector<Bits>& signatures) {
  if (signatures.empty()) return f_false(rel, side);
  const Bits& params = param_set(rel, side);
  Formula acc = f_false(rel, side);
  for (const Bits& sig : signatures) {
    std::optional<Formula> minterm;
    params.for_each([&](int p) {
      Formula lit = f_atom(rel, side, p);
      if (!sig.test(p)) lit = f_not(rel, lit);
      minterm = minterm ? f_and(rel, *minterm, lit) : lit;
    });
    acc = f_or(rel, acc, *minterm);
  }
  return acc;
}

}  // namespace stabkit

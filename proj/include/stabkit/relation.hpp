#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabkit/bits.hpp"

namespace stabkit {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Which of the two partitioned roles a formula or type space lives on.
/// phi: sets of rows cut out by column parameters; opp: the transposed view.
enum class Side { phi, opp };

inline Side flip(Side s) { return s == Side::phi ? Side::opp : Side::phi; }
inline const char* side_name(Side s) { return s == Side::phi ? "phi" : "opp"; }

/// A 0/1 relation on u_x * u_y ambient elements together with a designated
/// sub-model (m_x, m_y). Row and column bitsets are both materialized; the
/// matrix is immutable after construction.
struct AmbientRelation {
  int u_x = 0;
  int u_y = 0;
  std::vector<Bits> row;  // row[a] over u_y
  std::vector<Bits> col;  // col[b] over u_x
  Bits m_x;               // over u_x, nonempty
  Bits m_y;               // over u_y, nonempty

  bool entry(int a, int b) const { return row[a].test(b); }

  bool operator==(const AmbientRelation& o) const {
    return u_x == o.u_x && u_y == o.u_y && row == o.row && m_x == o.m_x &&
           m_y == o.m_y;
  }
};

/// Builds and validates a relation. Rows are given as bitsets over u_y;
/// m_x/m_y as index lists. Throws ValidationError on dimension mismatch,
/// out-of-range sub-model indices, or empty sub-model sides.
AmbientRelation make_relation(int u_x, int u_y, const std::vector<Bits>& rows,
                              const std::vector<int>& m_x,
                              const std::vector<int>& m_y);

/// Same, with rows as strings of '0'/'1'.
AmbientRelation make_relation(const std::vector<std::string>& rows,
                              const std::vector<int>& m_x,
                              const std::vector<int>& m_y);

/// Convenience: sub-model = everything.
AmbientRelation make_relation(const std::vector<std::string>& rows);

/// Transposed matrix with the sub-model sides exchanged. An involution.
AmbientRelation opposite(const AmbientRelation& rel);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

/// Boolean-combination tree in negation normal form. Atom payloads are
/// parameter indices: columns in m_y on the phi side, rows in m_x on the
/// opp side.
struct FormulaNode {
  enum Kind { True, False, Atom, NotAtom, And, Or };
  Kind kind = True;
  int atom = -1;
  std::vector<FormulaNode> kids;
};

/// A formula together with its cached extension (phi side: the set of ambient
/// rows satisfying it; opp side: the set of ambient columns). The extension
/// always equals the evaluation of the tree against the relation it was built
/// from.
struct Formula {
  Side side = Side::phi;
  FormulaNode root;
  Bits extension;
};

Formula f_true(const AmbientRelation& rel, Side side);
Formula f_false(const AmbientRelation& rel, Side side);
/// Atom phi(x, b) for b in m_y (phi side) or phi(a, y) for a in m_x (opp).
Formula f_atom(const AmbientRelation& rel, Side side, int param);
Formula f_and(const AmbientRelation& rel, const Formula& a, const Formula& b);
Formula f_or(const AmbientRelation& rel, const Formula& a, const Formula& b);
/// Negation, pushed through the tree to preserve negation normal form.
Formula f_not(const AmbientRelation& rel, const Formula& f);

/// Recomputes the extension of a formula tree from scratch. Validates that
/// every atom lies in the generating sub-model side.
Bits eval_formula(const AmbientRelation& rel, Side side, const FormulaNode& n);
inline Bits eval_formula(const AmbientRelation& rel, const Formula& f) {
  return eval_formula(rel, f.side, f.root);
}

// ---------------------------------------------------------------------------
// Algebra atoms
// ---------------------------------------------------------------------------

/// A minimal nonzero element of the finite algebra generated by the sub-model
/// parameters: an ambient trace class. signature is the common trace (masked
/// to the parameter side), extension the class of ambient elements carrying it.
struct AlgebraAtom {
  Bits signature;
  Bits extension;
};

/// Atoms of the algebra of row sets generated by {phi(x,b) : b in m_y}:
/// ambient rows partitioned by their trace on m_y. Ordered by least member.
std::vector<AlgebraAtom> atoms_of_phi_algebra(const AmbientRelation& rel);

/// Atoms on the requested side (opp = atoms of the transposed algebra,
/// i.e. ambient columns partitioned by their trace on m_x).
std::vector<AlgebraAtom> atoms_of_algebra(const AmbientRelation& rel,
                                          Side side);

/// Disjunction of the exact trace classes with the given signatures:
/// one conjunction of literals per atom, OR-ed together. FALSE when empty.
Formula formula_of_atom_signatures(const AmbientRelation& rel, Side side,
                                   const std::vector<Bits>& signatures);

}  // namespace stabkit

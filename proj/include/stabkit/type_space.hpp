#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "stabkit/relation.hpp"

namespace stabkit {

/// A point of the finite type space: an ambient trace class over the
/// sub-model parameters, with every ambient element realizing it.
struct PhiType {
  int id = -1;
  Bits trace;                   // masked to the parameter side
  std::vector<int> realizers;   // ascending ambient indices, never empty
  bool realized_in_m = false;   // some realizer lies in the sub-model
  std::optional<Formula> definition;            // filled by fill_definitions
  std::optional<std::pair<int, int>> undef_witness;  // two parameters split by
                                                     // the trace
};

/// The space of types on one side of a relation. Types are ordered by their
/// least realizer; every ambient element of the relevant side belongs to
/// exactly one type. Immutable once definitions are filled.
struct TypeSpace {
  AmbientRelation rel;
  Side side = Side::phi;
  std::vector<PhiType> types;
  std::vector<int> type_of;  // ambient element -> type id
  bool definitions_filled = false;

  const PhiType& type(int id) const;
  int count() const { return int(types.size()); }
};

TypeSpace compute_type_space(const AmbientRelation& rel, Side side);

using TypeSpacePtr = std::shared_ptr<const TypeSpace>;

/// compute_type_space + fill_definitions, shared.
TypeSpacePtr make_type_space(const AmbientRelation& rel, Side side);

/// Outcome of a definability check: either a defining formula on the opposite
/// side, or a two-parameter witness (same opposite-side atom, different trace
/// membership) proving no such formula exists.
struct DefinitionResult {
  std::optional<Formula> formula;
  std::optional<std::pair<int, int>> witness;
  bool definable() const { return formula.has_value(); }
};

/// Decides definability of a type by the union-of-atoms criterion, which is
/// exact on finite algebras: the trace must be constant on every atom of the
/// opposite algebra that meets the sub-model parameters. The returned formula
/// is the disjunction of the atoms contained in the trace, so for every
/// sub-model parameter b: b satisfies it iff trace[b] = 1.
DefinitionResult definition_of(const TypeSpace& ts, int type_id);

/// Runs definition_of over every type and stores the results in the space.
void fill_definitions(TypeSpace& ts);

struct ChiResult {
  int forward = 0;   // q satisfies the definition of p
  int backward = 0;  // p satisfies the definition of q
  bool symmetric = false;
};

/// The pairing of a phi-type with an opp-type through their definitions,
/// evaluated on realizers. Requires definitions filled on both spaces; throws
/// ValidationError if either input type is undefinable or the spaces do not
/// sit over the same relation.
ChiResult chi_eval(const TypeSpace& phi_space, const TypeSpace& opp_space,
                   int p_id, int q_id);

}  // namespace stabkit

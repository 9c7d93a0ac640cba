#pragma once

#include <map>
#include <string>
#include <vector>

#include "stabkit/rational.hpp"
#include "stabkit/type_space.hpp"

namespace stabkit {

/// A finitely additive probability measure on the formula algebra of a type
/// space, kept in normal form: an exact-rational weighted sum of types.
/// Weights are positive and sum to exactly 1; zero weights are omitted.
struct KeislerMeasure {
  TypeSpacePtr space;
  std::map<int, Rat> weights;

  Rat weight(int type_id) const {
    auto it = weights.find(type_id);
    return it == weights.end() ? Rat(0) : it->second;
  }
};

/// Validates the normal-form invariants (known ids, positive weights, total
/// exactly 1) and returns the measure.
KeislerMeasure make_measure(TypeSpacePtr space, std::map<int, Rat> weights);

KeislerMeasure dirac(TypeSpacePtr space, int type_id);

/// Counting average of ambient elements of the space's side; multiplicities
/// respected.
KeislerMeasure average(TypeSpacePtr space, const std::vector<int>& elements);

/// Weight pairs ordered by descending weight, ties by type id: the canonical
/// presentation of the weighted-sum normal form.
std::vector<std::pair<int, Rat>> normal_form(const KeislerMeasure& mu);

/// mu(f): the exact sum of weights of the types whose realizers satisfy f.
/// Finitely additive by construction. Throws on side or ground mismatch.
Rat measure_of_formula(const KeislerMeasure& mu, const Formula& f);

struct Decomposition {
  KeislerMeasure atomic;
  std::vector<std::pair<int, Rat>> ordered;  // descending weight, ties by id
  Rat residual_mass;                         // always 0 on a finite algebra
};

/// Splits a raw assignment of weights to all atoms of the algebra into its
/// atomic part and a residual. On a finite algebra every part below the
/// minimal positive atom weight is impossible, so the residual is always 0
/// and the atomic part reconstructs the assignment exactly.
Decomposition sobczyk_hammer_decompose(TypeSpacePtr space,
                                       const std::vector<Rat>& atom_values);

/// The minimum over all partitions of the algebra into formula classes of the
/// maximum part measure. On a finite space this is the largest atom weight:
/// the smallest epsilon for which the measure has no sub-epsilon partition.
Rat strong_continuity_deficit(const KeislerMeasure& mu);

// ---------------------------------------------------------------------------
// 2-trees
// ---------------------------------------------------------------------------

struct TwoTreeNode {
  enum Stop { split, single_atom, depth_cap };
  Formula set;
  Rat measure;
  std::vector<int> atom_ids;  // support atoms inside this node
  int depth = 0;
  int left = -1;
  int right = -1;
  Stop stop = split;
};

/// Binary tree of formula classes: children of a node are disjoint subsets of
/// it with strictly positive measure, and incomparable nodes are disjoint.
struct TwoTree {
  std::vector<TwoTreeNode> nodes;  // nodes[0] is the root
  int depth = 0;
};

/// Stagewise construction driven by the measure: the root is the whole space,
/// and each leaf splits into the bipartition of its support atoms that
/// minimizes the measure imbalance (exactly; ties resolved toward the
/// lexicographically least side containing the lowest atom id). Leaves stop
/// at single atoms or at max_depth.
TwoTree build_two_tree(const KeislerMeasure& mu, int max_depth);

/// Checks every structural invariant; returns a diagnostic ("" when fine).
std::string check_two_tree(const TwoTree& tree, const KeislerMeasure& mu);

}  // namespace stabkit

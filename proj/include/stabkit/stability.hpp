#pragma once

#include <optional>
#include <vector>

#include "stabkit/rational.hpp"
#include "stabkit/relation.hpp"

namespace stabkit {

/// An order-pattern certificate: pairwise-distinct rows and columns with
/// entry(rows[i], cols[j]) = 1 exactly when i < j (direction '<') or i > j
/// (direction '>'), for all i != j. Diagonal entries are unconstrained.
struct LadderWitness {
  std::vector<int> rows;
  std::vector<int> cols;
  char direction = '<';
};

struct LadderResult {
  int n = 0;
  std::optional<LadderWitness> witness;
  bool cap_reached = false;
};

/// Largest n <= cap admitting a ladder witness, searched exactly with bitset
/// pruning. Both directions coincide on finite data (reversing a witness
/// flips the direction), so the reported witness uses '<'. Among maximal
/// witnesses the lexicographically least interleaved sequence
/// (rows[0], cols[0], rows[1], cols[1], ...) is returned. n >= 1 whenever
/// both sides are nonempty.
LadderResult ladder_index(const AmbientRelation& rel, int cap);

struct KOrderResult {
  bool has = false;
  std::optional<LadderWitness> witness;
};

/// Whether a ladder of length exactly k exists.
KOrderResult has_k_order_property(const AmbientRelation& rel, int k);

/// "" when the witness is valid for the relation, else a diagnostic.
std::string check_ladder_witness(const AmbientRelation& rel,
                                 const LadderWitness& w);

struct VcResult {
  int dim = 0;
  std::vector<int> shattered;  // a witness set of columns, ascending
};

/// Largest d such that some d columns are shattered by the rows viewed as
/// subsets of the columns. Exact; the lexicographically least witness of
/// maximum size is returned.
VcResult vc_dimension(const AmbientRelation& rel);

struct DoubleLimitReport {
  std::optional<Rat> inner_outer;  // per-column limits over rows, then across
  std::optional<Rat> outer_inner;  // per-row limits over columns, then across
  bool inner_outer_converged = false;
  bool outer_inner_converged = false;
  std::optional<Rat> gap;
};

/// Finite double-limit diagnostic on a square grid of values f(a_i, b_j).
/// A sequence counts as converged when its tail of length ceil(n/4) stays
/// within the tolerance; its estimate is the tail mean. Only the first
/// n - ceil(n/4) rows and columns are assessed for inner limits, since the
/// remaining ones have no tail beyond the truncation boundary; the same rule
/// is then applied to the sequence of inner estimates. Purely diagnostic.
DoubleLimitReport double_limit_estimate(
    const std::vector<std::vector<Rat>>& values, const Rat& tolerance);

}  // namespace stabkit

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stabkit/measure.hpp"
#include "stabkit/vc_approx.hpp"

namespace stabkit {

/// An (r,eps)-order array: product values at least r+eps on and below the
/// diagonal, at most r above it. grid[i][j] is the exact product of
/// mus[i] with nus[j] at the relation.
struct OrderArrayWitness {
  std::vector<KeislerMeasure> mus;
  std::vector<KeislerMeasure> nus;
  Rat r;
  Rat eps;
  std::vector<std::vector<Rat>> grid;
};

/// Largest ordered sub-selection (no repetition) of the candidate measures
/// forming an (r,eps)-order array, up to n_max. Product values are exact;
/// the lexicographically least maximal selection is returned. nullopt when
/// even a single diagonal pair is unachievable. Throws UndefinableTypeError
/// if a candidate's support is undefinable.
std::optional<OrderArrayWitness> order_array_search(
    const std::vector<KeislerMeasure>& mu_candidates,
    const std::vector<KeislerMeasure>& nu_candidates, const Rat& r,
    const Rat& eps, int n_max);

/// Re-derives the grid from the stored measures and checks the order
/// constraints. "" when valid.
std::string check_order_witness(const OrderArrayWitness& w);

/// Disjunction over rectangles A x B of [N] x [N] whose area exceeds
/// (r + eps/2) * N^2, each rectangle standing for the conjunction of the
/// relation on its cells. Stored as index-set masks, never expanded.
struct ThetaFormula {
  int block = 0;
  Rat r;
  Rat eps;
  std::vector<std::pair<uint32_t, uint32_t>> rects;  // (row mask, col mask)
  bool empty_disjunction = false;  // threshold at or above 1: identically false
};

/// Enumerates the rectangles. Block sizes above 10 are refused (the
/// disjunction has ~4^N rectangles).
ThetaFormula build_theta(int block, const Rat& r, const Rat& eps);

/// 1 iff some stored rectangle is all-ones on the tuple pair. Early exit.
int evaluate_theta(const ThetaFormula& theta, const AmbientRelation& rel,
                   const std::vector<int>& row_tuple,
                   const std::vector<int>& col_tuple);

struct ThetaCell {
  int i = 0, j = 0;
  int theta = 0;
  Rat density;               // tuple-average product value
  bool expected_one = false;  // i >= j
  bool dichotomy_ok = false;
  bool chain_ok = false;  // density <= r+eps/8 above, >= r+7eps/8 elsewhere
  bool boundary = false;  // density exactly r+eps/2
};

struct ThetaLadderReport {
  bool success = false;  // theta reproduces the order pattern everywhere
  int block = 0;
  std::vector<std::vector<int>> row_tuples;
  std::vector<std::vector<int>> col_tuples;
  std::vector<ThetaCell> cells;
};

/// Diagnostics of one tuple pair at grid position (i, j): theta value, tuple
/// density, the order dichotomy, the derived chain bounds, and whether the
/// density sits exactly on the r + eps/2 threshold.
ThetaCell theta_cell_report(const ThetaFormula& theta,
                            const AmbientRelation& rel,
                            const std::vector<int>& row_tuple,
                            const std::vector<int>& col_tuple, int i, int j,
                            const Rat& r, const Rat& eps);

/// Replaces each witness measure by an eps/16-approximating tuple, reduces
/// each tuple to its minimal multiplicity profile (the average is unchanged),
/// pads every tuple to the common least multiple length, and verifies that
/// theta on the tuple grid reproduces the order pattern. Chain and boundary
/// diagnostics are reported per cell.
ThetaLadderReport theta_ladder_check(const OrderArrayWitness& w, const Rat& eps,
                                     uint64_t seed);

}  // namespace stabkit

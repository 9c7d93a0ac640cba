#include "stabkit/stability.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace stabkit {

namespace {

// The '<' pattern is searched pair by pair: after placing k pairs, the next
// row must sit in every placed column's zero set and the next column in every
// placed row's one set; the diagonal of a pair is unconstrained. rows_ok /
// cols_ok carry those intersections; row_one / col_zero are the memoized
// compatibility bitsets. Rows and columns are pairwise distinct.
struct LadderSearch {
  const AmbientRelation& rel;
  int cap;
  std::vector<Bits> col_zero;  // col_zero[b]: rows a with entry(a,b) = 0
  std::vector<int> row_order;  // rows by descending degree
  std::vector<int> col_order;  // cols by ascending degree
  Bits used_rows, used_cols;
  std::vector<int> stack_rows, stack_cols;
  int best = 0;

  LadderSearch(const AmbientRelation& r, int c)
      : rel(r), cap(c), used_rows(r.u_x), used_cols(r.u_y) {
    col_zero.reserve(r.u_y);
    for (int b = 0; b < r.u_y; ++b) col_zero.push_back(r.col[b].flipped());
    row_order.resize(r.u_x);
    std::iota(row_order.begin(), row_order.end(), 0);
    std::stable_sort(row_order.begin(), row_order.end(), [&](int a, int b) {
      return r.row[a].count() > r.row[b].count();
    });
    col_order.resize(r.u_y);
    std::iota(col_order.begin(), col_order.end(), 0);
    std::stable_sort(col_order.begin(), col_order.end(), [&](int a, int b) {
      return r.col[a].count() < r.col[b].count();
    });
  }

  // Phase 1: maximum reachable length.
  void max_depth(int depth, const Bits& rows_ok, const Bits& cols_ok) {
    if (depth > best) best = depth;
    if (best == cap) return;
    Bits ra = rows_ok & used_rows.flipped();
    Bits cb = cols_ok & used_cols.flipped();
    int room = std::min(ra.count(), cb.count());
    if (depth + room <= best) return;
    for (int a : row_order) {
      if (!ra.test(a)) continue;
      Bits next_cols = cols_ok & rel.row[a];
      if (next_cols.none()) {
        // Any remaining column completes one more pair; nothing extends it.
        if (depth + 1 > best) best = depth + 1;
        if (best == cap) return;
        continue;
      }
      used_rows.set(a);
      for (int b : col_order) {
        if (!cb.test(b)) continue;
        used_cols.set(b);
        max_depth(depth + 1, rows_ok & col_zero[b], next_cols);
        used_cols.reset(b);
        if (best == cap) break;
      }
      used_rows.reset(a);
      if (best == cap) return;
    }
  }

  // Phase 2: lexicographically least witness of the known length, on the
  // interleaved sequence (rows[0], cols[0], rows[1], ...). Candidates are
  // tried in index order, so the first completion is the answer.
  bool lex_witness(int depth, int target, const Bits& rows_ok,
                   const Bits& cols_ok) {
    if (depth == target) return true;
    Bits ra = rows_ok & used_rows.flipped();
    Bits cb = cols_ok & used_cols.flipped();
    if (depth + std::min(ra.count(), cb.count()) < target) return false;
    for (int a = ra.first(); a >= 0; a = ra.next(a + 1)) {
      Bits next_cols = cols_ok & rel.row[a];
      used_rows.set(a);
      stack_rows.push_back(a);
      for (int b = cb.first(); b >= 0; b = cb.next(b + 1)) {
        used_cols.set(b);
        stack_cols.push_back(b);
        if (lex_witness(depth + 1, target, rows_ok & col_zero[b], next_cols))
          return true;
        stack_cols.pop_back();
        used_cols.reset(b);
      }
      stack_rows.pop_back();
      used_rows.reset(a);
    }
    return false;
  }
};

}  // namespace

LadderResult ladder_index(const AmbientRelation& rel, int cap) {
  if (cap < 1) throw ValidationError("ladder cap must be >= 1");
  int clamped = std::min({cap, rel.u_x, rel.u_y});

  LadderSearch s(rel, clamped);
  s.max_depth(0, Bits::all(rel.u_x), Bits::all(rel.u_y));

  LadderResult res;
  res.n = s.best;
  res.cap_reached = s.best == cap;
  LadderSearch w(rel, clamped);
  if (!w.lex_witness(0, s.best, Bits::all(rel.u_x), Bits::all(rel.u_y)))
    throw std::logic_error("ladder witness re-derivation failed");
  res.witness = LadderWitness{w.stack_rows, w.stack_cols, '<'};
  return res;
}

KOrderResult has_k_order_property(const AmbientRelation& rel, int k) {
  if (k < 1) throw ValidationError("order-property length must be >= 1");
  LadderResult r = ladder_index(rel, k);
  KOrderResult out;
  out.has = r.n == k;
  if (out.has) out.witness = r.witness;
  return out;
}

std::string check_ladder_witness(const AmbientRelation& rel,
                                 const LadderWitness& w) {
  size_t n = w.rows.size();
  if (n == 0) return "empty witness";
  if (w.cols.size() != n) return "row/column count mismatch";
  if (w.direction != '<' && w.direction != '>') return "bad direction";
  for (int a : w.rows)
    if (a < 0 || a >= rel.u_x) return "row index out of range";
  for (int b : w.cols)
    if (b < 0 || b >= rel.u_y) return "column index out of range";
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (w.rows[i] == w.rows[j]) return "repeated row";
      if (w.cols[i] == w.cols[j]) return "repeated column";
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool want = w.direction == '<' ? i < j : i > j;
      if (rel.entry(w.rows[i], w.cols[j]) != want)
        return "pattern violated at (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
    }
  return "";
}

// ---------------------------------------------------------------------------
// VC dimension
// ---------------------------------------------------------------------------

namespace {

bool shatters(const AmbientRelation& rel, const std::vector<int>& cols) {
  size_t d = cols.size();
  size_t want = size_t(1) << d;
  std::vector<bool> seen(want, false);
  size_t found = 0;
  for (int a = 0; a < rel.u_x; ++a) {
    size_t pat = 0;
    for (size_t k = 0; k < d; ++k)
      if (rel.entry(a, cols[k])) pat |= size_t(1) << k;
    if (!seen[pat]) {
      seen[pat] = true;
      if (++found == want) return true;
    }
  }
  return found == want;
}

}  // namespace

VcResult vc_dimension(const AmbientRelation& rel) {
  // Duplicate columns can never appear together in a shattered set.
  std::vector<int> cols;
  {
    std::unordered_map<Bits, int, BitsHash> seen;
    for (int b = 0; b < rel.u_y; ++b)
      if (seen.emplace(rel.col[b], b).second) cols.push_back(b);
  }

  VcResult best;  // the empty set is always shattered
  std::vector<std::vector<int>> level = {{}};
  while (true) {
    std::vector<std::vector<int>> next;
    for (const auto& s : level) {
      int lo = s.empty() ? 0 : s.back() + 1;
      for (int c : cols) {
        if (c < lo) continue;
        std::vector<int> t = s;
        t.push_back(c);
        if (shatters(rel, t)) next.push_back(std::move(t));
      }
    }
    if (next.empty()) break;
    best.dim = int(next.front().size());
    best.shattered = next.front();
    level = std::move(next);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Double limits
// ---------------------------------------------------------------------------

namespace {

struct TailEstimate {
  bool converged = false;
  Rat value;
};

TailEstimate assess_tail(const std::vector<Rat>& seq, int tail_len,
                         const Rat& tol) {
  TailEstimate e;
  if (tail_len <= 0 || tail_len > int(seq.size())) return e;
  Rat lo = seq[seq.size() - size_t(tail_len)];
  Rat hi = lo;
  Rat sum = 0;
  for (size_t k = seq.size() - size_t(tail_len); k < seq.size(); ++k) {
    lo = std::min(lo, seq[k]);
    hi = std::max(hi, seq[k]);
    sum += seq[k];
  }
  if (hi - lo > tol) return e;
  e.converged = true;
  e.value = sum / tail_len;
  return e;
}

// One iterated limit. by_cols: inner limit runs over the row index (one
// sequence per column), outer over columns. Only the first n - ceil(n/4)
// inner sequences are assessed; the last ones have no data beyond the
// truncation boundary. Unconverged inner sequences are dropped.
TailEstimate iterate_side(const std::vector<std::vector<Rat>>& g, bool by_cols,
                          const Rat& tol) {
  int n = int(g.size());
  int t = (n + 3) / 4;
  std::vector<Rat> inner;
  for (int k = 0; k < n - t; ++k) {
    std::vector<Rat> seq(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      seq[size_t(i)] =
          by_cols ? g[size_t(i)][size_t(k)] : g[size_t(k)][size_t(i)];
    TailEstimate e = assess_tail(seq, t, tol);
    if (e.converged) inner.push_back(e.value);
  }
  if (inner.empty()) return {};
  return assess_tail(inner, (int(inner.size()) + 3) / 4, tol);
}

}  // namespace

DoubleLimitReport double_limit_estimate(
    const std::vector<std::vector<Rat>>& values, const Rat& tolerance) {
  int n = int(values.size());
  if (n < 4) throw ValidationError("double-limit grid must be at least 4x4");
  for (const auto& row : values)
    if (int(row.size()) != n)
      throw ValidationError("double-limit grid must be square");
  if (tolerance < 0) throw ValidationError("tolerance must be nonnegative");

  DoubleLimitReport rep;
  TailEstimate io = iterate_side(values, /*by_cols=*/true, tolerance);
  TailEstimate oi = iterate_side(values, /*by_cols=*/false, tolerance);
  rep.inner_outer_converged = io.converged;
  rep.outer_inner_converged = oi.converged;
  if (io.converged) rep.inner_outer = io.value;
  if (oi.converged) rep.outer_inner = oi.value;
  if (io.converged && oi.converged) rep.gap = abs(io.value - oi.value);
  return rep;
}

}  // namespace stabkit

#pragma once

// Test-only reference implementations. These stay deliberately naive: plain
// loops over the matrix, string-keyed maps, no bitsets, no memoized
// compatibility sets, no pruning beyond direct constraint checks. They are
// the independent side of every dual-route check in the suites.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "stabkit/measure.hpp"
#include "stabkit/relation.hpp"

namespace oracle {

using stabkit::AmbientRelation;
using stabkit::FormulaNode;
using stabkit::Rat;
using stabkit::Side;

// Truth of a formula tree at one element, by matrix lookups only.
inline bool eval_at(const AmbientRelation& rel, Side side,
                    const FormulaNode& n, int elem) {
  auto entry = [&](int param) {
    return side == Side::phi ? rel.entry(elem, param) : rel.entry(param, elem);
  };
  switch (n.kind) {
    case FormulaNode::True:
      return true;
    case FormulaNode::False:
      return false;
    case FormulaNode::Atom:
      return entry(n.atom);
    case FormulaNode::NotAtom:
      return !entry(n.atom);
    case FormulaNode::And:
      for (const auto& k : n.kids)
        if (!eval_at(rel, side, k, elem)) return false;
      return true;
    case FormulaNode::Or:
      for (const auto& k : n.kids)
        if (eval_at(rel, side, k, elem)) return true;
      return false;
  }
  return false;
}

// Trace classes keyed by the printed trace, values ascending element lists.
inline std::map<std::string, std::vector<int>> trace_classes(
    const AmbientRelation& rel, Side side) {
  int ground = side == Side::phi ? rel.u_x : rel.u_y;
  std::vector<int> params = (side == Side::phi ? rel.m_y : rel.m_x).to_indices();
  std::map<std::string, std::vector<int>> classes;
  for (int e = 0; e < ground; ++e) {
    std::string key;
    for (int p : params) {
      bool v = side == Side::phi ? rel.entry(e, p) : rel.entry(p, e);
      key.push_back(v ? '1' : '0');
    }
    classes[key].push_back(e);
  }
  return classes;
}

// Plain recursive ladder enumeration over both directions. Distinct rows and
// columns, diagonal unconstrained.
inline void ladder_rec(const AmbientRelation& rel, char dir,
                       std::vector<int>& rows, std::vector<int>& cols, int cap,
                       int& best) {
  best = std::max(best, int(rows.size()));
  if (int(rows.size()) == cap) return;
  int k = int(rows.size());
  for (int a = 0; a < rel.u_x; ++a) {
    if (std::find(rows.begin(), rows.end(), a) != rows.end()) continue;
    for (int b = 0; b < rel.u_y; ++b) {
      if (std::find(cols.begin(), cols.end(), b) != cols.end()) continue;
      bool ok = true;
      for (int t = 0; t < k && ok; ++t) {
        bool want_tk = dir == '<' ? t < k : t > k;
        bool want_kt = dir == '<' ? k < t : k > t;
        if (rel.entry(rows[size_t(t)], b) != want_tk) ok = false;
        if (rel.entry(a, cols[size_t(t)]) != want_kt) ok = false;
      }
      if (!ok) continue;
      rows.push_back(a);
      cols.push_back(b);
      ladder_rec(rel, dir, rows, cols, cap, best);
      rows.pop_back();
      cols.pop_back();
      if (best == cap) return;
    }
  }
}

inline int ladder_index(const AmbientRelation& rel, int cap) {
  int best = 0;
  for (char dir : {'<', '>'}) {
    std::vector<int> rows, cols;
    ladder_rec(rel, dir, rows, cols, std::min({cap, rel.u_x, rel.u_y}), best);
  }
  return best;
}

inline bool shattered(const AmbientRelation& rel,
                      const std::vector<int>& cols) {
  std::set<std::string> pats;
  for (int a = 0; a < rel.u_x; ++a) {
    std::string p;
    for (int c : cols) p.push_back(rel.entry(a, c) ? '1' : '0');
    pats.insert(p);
  }
  return pats.size() == (size_t(1) << cols.size());
}

inline int vc_dimension(const AmbientRelation& rel) {
  int best = 0;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int from, int want) -> bool {
    if (want == 0) return shattered(rel, pick);
    for (int c = from; c < rel.u_y; ++c) {
      pick.push_back(c);
      if (self(self, c + 1, want - 1)) {
        pick.pop_back();
        return true;
      }
      pick.pop_back();
    }
    return false;
  };
  for (int d = 1; d <= rel.u_y; ++d) {
    if (!rec(rec, 0, d)) break;
    best = d;
  }
  return best;
}

// Full re-enumeration of the rectangles with area above (r + eps/2) * N^2 and
// a direct all-ones check.
inline int theta_value(int N, const Rat& r, const Rat& eps,
                       const AmbientRelation& rel, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Rat thr = (r + eps / 2) * N * N;
  for (long A = 1; A < (1L << N); ++A)
    for (long B = 1; B < (1L << N); ++B) {
      long area = 0;
      {
        int ca = 0, cb = 0;
        for (int i = 0; i < N; ++i) {
          if ((A >> i) & 1) ca++;
          if ((B >> i) & 1) cb++;
        }
        area = long(ca) * cb;
      }
      if (!(Rat(area) > thr)) continue;
      bool all = true;
      for (int i = 0; i < N && all; ++i)
        for (int j = 0; j < N && all; ++j)
          if (((A >> i) & 1) && ((B >> j) & 1))
            all = rel.entry(rows[size_t(i)], cols[size_t(j)]);
      if (all) return 1;
    }
  return 0;
}

// Exhaustive bipartition imbalance (for small atom counts).
inline Rat min_imbalance(const std::vector<Rat>& w) {
  size_t m = w.size();
  Rat total(0);
  for (const Rat& x : w) total += x;
  Rat best = total;
  for (size_t mask = 1; mask + 1 < (size_t(1) << m); ++mask) {
    Rat s(0);
    for (size_t k = 0; k < m; ++k)
      if ((mask >> k) & 1) s += w[size_t(k)];
    Rat im = abs(total - s - s);
    if (im < best) best = im;
  }
  return best;
}

// Minimum over all set partitions of the maximum part weight.
inline Rat partition_minmax(const std::vector<Rat>& w) {
  std::vector<int> part(w.size(), -1);
  Rat best(2);
  auto rec = [&](auto&& self, size_t k, int used) -> void {
    if (k == w.size()) {
      std::vector<Rat> sums(size_t(used), Rat(0));
      for (size_t i = 0; i < w.size(); ++i) sums[size_t(part[i])] += w[i];
      Rat mx(0);
      for (const Rat& s : sums) mx = std::max(mx, s);
      best = std::min(best, mx);
      return;
    }
    for (int p = 0; p <= used && p < int(w.size()); ++p) {
      part[k] = p;
      self(self, k + 1, std::max(used, p + 1));
    }
    part[k] = -1;
  };
  rec(rec, 0, 0);
  return best;
}

// Exhaustive order-array search over ordered, repetition-free selections of
// candidate indices, on a precomputed value grid.
inline int order_search_max(const std::vector<std::vector<Rat>>& value,
                            const Rat& r, const Rat& eps, int n_max) {
  int nm = int(value.size());
  int nn = nm ? int(value[0].size()) : 0;
  std::vector<int> is, js;
  int best = 0;
  auto ok_pair = [&](int i, int j, int pi, int pj) {
    // grid positions pi, pj for candidates i, j
    if (pi >= pj) return value[size_t(i)][size_t(j)] >= r + eps;
    return value[size_t(i)][size_t(j)] <= r;
  };
  auto rec = [&](auto&& self) -> void {
    best = std::max(best, int(is.size()));
    if (int(is.size()) == n_max) return;
    int k = int(is.size());
    for (int i = 0; i < nm; ++i) {
      if (std::find(is.begin(), is.end(), i) != is.end()) continue;
      for (int j = 0; j < nn; ++j) {
        if (std::find(js.begin(), js.end(), j) != js.end()) continue;
        bool ok = ok_pair(i, j, k, k);
        for (int t = 0; t < k && ok; ++t)
          ok = ok_pair(i, js[size_t(t)], k, t) && ok_pair(is[size_t(t)], j, t, k);
        if (!ok) continue;
        is.push_back(i);
        js.push_back(j);
        self(self);
        is.pop_back();
        js.pop_back();
        if (best == n_max) return;
      }
    }
  };
  rec(rec);
  return best;
}

}  // namespace oracle

#include "stabkit/order.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "stabkit/morley.hpp"

namespace stabkit {

namespace {

void check_candidates(const std::vector<KeislerMeasure>& mus,
                      const std::vector<KeislerMeasure>& nus) {
  if (mus.empty() || nus.empty())
    throw ValidationError("order search needs candidates on both sides");
  for (const auto& m : mus)
    if (m.space->side != Side::phi || !(m.space->rel == mus[0].space->rel))
      throw ValidationError("mu candidates must share one phi-side space");
  for (const auto& n : nus)
    if (n.space->side != Side::opp || !(n.space->rel == mus[0].space->rel))
      throw ValidationError("nu candidates must be opp-side over the same relation");
}

// Order-pattern DFS over candidate indices, pairwise distinct per side.
// hi_rows[j] = mu indices valid against placed nu j (value >= r+eps);
// lo_cols[i] = nu indices valid against placed mu i (value <= r).
struct OrderSearch {
  const std::vector<Bits>& hi_rows;
  const std::vector<Bits>& lo_cols;
  const std::vector<Bits>& hi_by_mu;  // hi_by_mu[i] = {j : E[i][j] >= r+eps}
  int n_mu, n_nu, cap;
  Bits used_mu, used_nu;
  std::vector<int> sel_mu, sel_nu;
  int best = 0;

  OrderSearch(const std::vector<Bits>& hr, const std::vector<Bits>& lc,
              const std::vector<Bits>& hm, int nm, int nn, int c)
      : hi_rows(hr),
        lo_cols(lc),
        hi_by_mu(hm),
        n_mu(nm),
        n_nu(nn),
        cap(c),
        used_mu(nm),
        used_nu(nn) {}

  void max_depth(int depth, const Bits& mu_ok, const Bits& nu_ok) {
    if (depth > best) best = depth;
    if (best == cap) return;
    Bits ma = mu_ok & used_mu.flipped();
    Bits nb = nu_ok & used_nu.flipped();
    if (depth + std::min(ma.count(), nb.count()) <= best) return;
    for (int i = ma.first(); i >= 0; i = ma.next(i + 1)) {
      Bits diag = nb & hi_by_mu[size_t(i)];  // the new pair itself needs >= r+eps
      if (diag.none()) continue;
      used_mu.set(i);
      for (int j = diag.first(); j >= 0; j = diag.next(j + 1)) {
        used_nu.set(j);
        max_depth(depth + 1, mu_ok & hi_rows[size_t(j)],
                  nu_ok & lo_cols[size_t(i)]);
        used_nu.reset(j);
        if (best == cap) break;
      }
      used_mu.reset(i);
      if (best == cap) return;
    }
  }

  bool lex_witness(int depth, int target, const Bits& mu_ok,
                   const Bits& nu_ok) {
    if (depth == target) return true;
    Bits ma = mu_ok & used_mu.flipped();
    Bits nb = nu_ok & used_nu.flipped();
    if (depth + std::min(ma.count(), nb.count()) < target) return false;
    for (int i = ma.first(); i >= 0; i = ma.next(i + 1)) {
      Bits diag = nb & hi_by_mu[size_t(i)];
      used_mu.set(i);
      sel_mu.push_back(i);
      for (int j = diag.first(); j >= 0; j = diag.next(j + 1)) {
        used_nu.set(j);
        sel_nu.push_back(j);
        if (lex_witness(depth + 1, target, mu_ok & hi_rows[size_t(j)],
                        nu_ok & lo_cols[size_t(i)]))
          return true;
        sel_nu.pop_back();
        used_nu.reset(j);
      }
      sel_mu.pop_back();
      used_mu.reset(i);
    }
    return false;
  }
};

}  // namespace

std::optional<OrderArrayWitness> order_array_search(
    const std::vector<KeislerMeasure>& mu_candidates,
    const std::vector<KeislerMeasure>& nu_candidates, const Rat& r,
    const Rat& eps, int n_max) {
  check_candidates(mu_candidates, nu_candidates);
  if (!(eps > 0) || r < 0 || r + eps > 1)
    throw ValidationError("order thresholds must satisfy 0 <= r, 0 < eps, r+eps <= 1");
  if (n_max < 1) throw ValidationError("n_max must be >= 1");

  int nm = int(mu_candidates.size());
  int nn = int(nu_candidates.size());
  std::vector<std::vector<Rat>> value(static_cast<size_t>(nm));
  for (auto& row : value) row.resize(size_t(nn));
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nn; ++j)
      value[size_t(i)][size_t(j)] =
          morley_product(mu_candidates[size_t(i)], nu_candidates[size_t(j)]);

  Rat hi_thr = r + eps;
  std::vector<Bits> hi_rows(static_cast<size_t>(nn), Bits(nm));
  std::vector<Bits> lo_cols(static_cast<size_t>(nm), Bits(nn));
  std::vector<Bits> hi_by_mu(static_cast<size_t>(nm), Bits(nn));
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nn; ++j) {
      if (value[size_t(i)][size_t(j)] >= hi_thr) {
        hi_rows[size_t(j)].set(i);
        hi_by_mu[size_t(i)].set(j);
      }
      if (value[size_t(i)][size_t(j)] <= r) lo_cols[size_t(i)].set(j);
    }

  int cap = std::min({n_max, nm, nn});
  OrderSearch s(hi_rows, lo_cols, hi_by_mu, nm, nn, cap);
  s.max_depth(0, Bits::all(nm), Bits::all(nn));
  if (s.best == 0) return std::nullopt;

  OrderSearch w(hi_rows, lo_cols, hi_by_mu, nm, nn, cap);
  if (!w.lex_witness(0, s.best, Bits::all(nm), Bits::all(nn)))
    throw std::logic_error("order witness re-derivation failed");

  OrderArrayWitness out;
  out.r = r;
  out.eps = eps;
  for (int i : w.sel_mu) out.mus.push_back(mu_candidates[size_t(i)]);
  for (int j : w.sel_nu) out.nus.push_back(nu_candidates[size_t(j)]);
  out.grid.assign(size_t(s.best), std::vector<Rat>(size_t(s.best)));
  for (int a = 0; a < s.best; ++a)
    for (int b = 0; b < s.best; ++b)
      out.grid[size_t(a)][size_t(b)] =
          value[size_t(w.sel_mu[size_t(a)])][size_t(w.sel_nu[size_t(b)])];
  return out;
}

std::string check_order_witness(const OrderArrayWitness& w) {
  size_t n = w.mus.size();
  if (n == 0) return "empty witness";
  if (w.nus.size() != n || w.grid.size() != n) return "size mismatch";
  for (size_t i = 0; i < n; ++i) {
    if (w.grid[i].size() != n) return "grid not square";
    for (size_t j = 0; j < n; ++j) {
      Rat v = morley_product(w.mus[i], w.nus[j]);
      if (v != w.grid[i][j])
        return "grid value mismatch at (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
      if (i >= j && !(v >= w.r + w.eps))
        return "lower-triangle value below r+eps at (" + std::to_string(i) +
               "," + std::to_string(j) + ")";
      if (i < j && !(v <= w.r))
        return "upper-triangle value above r at (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// theta
// ---------------------------------------------------------------------------

ThetaFormula build_theta(int block, const Rat& r, const Rat& eps) {
  if (block < 1) throw ValidationError("theta block size must be >= 1");
  if (block > 10)
    throw ValidationError("theta block size above 10 is not supported");
  if (r < 0 || eps < 0) throw ValidationError("theta thresholds must be >= 0");

  ThetaFormula th;
  th.block = block;
  th.r = r;
  th.eps = eps;
  Rat area_thr = (r + eps / 2) * block * block;
  uint32_t full = block == 32 ? ~0u : (1u << block) - 1;
  for (uint32_t a = 1; a <= full; ++a) {
    int ca = std::popcount(a);
    for (uint32_t b = 1; b <= full; ++b)
      if (Rat(ca * std::popcount(b)) > area_thr) th.rects.emplace_back(a, b);
  }
  th.empty_disjunction = th.rects.empty();
  return th;
}

int evaluate_theta(const ThetaFormula& theta, const AmbientRelation& rel,
                   const std::vector<int>& row_tuple,
                   const std::vector<int>& col_tuple) {
  size_t n = size_t(theta.block);
  if (row_tuple.size() != n || col_tuple.size() != n)
    throw ValidationError("tuple length does not match the theta block size");
  std::vector<uint32_t> ones(n, 0);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (rel.entry(row_tuple[a], col_tuple[b])) ones[a] |= 1u << b;
  for (const auto& [ra, cb] : theta.rects) {
    bool all = true;
    uint32_t rest = ra;
    while (rest) {
      int a = std::countr_zero(rest);
      rest &= rest - 1;
      if ((ones[size_t(a)] & cb) != cb) {
        all = false;
        break;
      }
    }
    if (all) return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// theta over an order-array witness
// ---------------------------------------------------------------------------

namespace {

// Minimal multiplicity profile of a sampled tuple: same counting average,
// fewest positions.
std::vector<int> reduce_tuple(const std::vector<int>& elems) {
  std::map<int, long> counts;
  for (int e : elems) counts[e]++;
  long g = 0;
  for (const auto& [e, c] : counts) g = std::gcd(g, c);
  std::vector<int> out;
  for (const auto& [e, c] : counts)
    for (long k = 0; k < c / g; ++k) out.push_back(e);
  return out;
}

std::vector<int> repeat_tuple(const std::vector<int>& t, size_t len) {
  std::vector<int> out;
  out.reserve(len);
  while (out.size() < len)
    for (int e : t) out.push_back(e);
  return out;
}

}  // namespace

ThetaCell theta_cell_report(const ThetaFormula& theta,
                            const AmbientRelation& rel,
                            const std::vector<int>& row_tuple,
                            const std::vector<int>& col_tuple, int i, int j,
                            const Rat& r, const Rat& eps) {
  ThetaCell c;
  c.i = i;
  c.j = j;
  c.theta = evaluate_theta(theta, rel, row_tuple, col_tuple);
  long ones = 0;
  for (int a : row_tuple)
    for (int b : col_tuple)
      if (rel.entry(a, b)) ones++;
  c.density = rat(ones, long(row_tuple.size() * col_tuple.size()));
  c.expected_one = i >= j;
  c.dichotomy_ok = c.theta == (c.expected_one ? 1 : 0);
  c.chain_ok = c.expected_one ? c.density >= r + eps - eps / 8
                              : c.density <= r + eps / 8;
  c.boundary = c.density == r + eps / 2;
  return c;
}

namespace {

// Weight apportionment at denominator L by largest remainder, realizers
// standing in for their types. The tuple has exactly L positions.
std::vector<int> apportioned_tuple(const KeislerMeasure& m, int L) {
  std::vector<std::pair<Rat, int>> remainders;
  std::map<int, long> count;
  long used = 0;
  for (const auto& [id, w] : m.weights) {
    Rat scaled = w * L;
    mpz_class fl = scaled.get_num() / scaled.get_den();
    count[id] = fl.get_si();
    used += count[id];
    remainders.emplace_back(Rat(scaled - fl), id);
  }
  std::sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long k = 0; k < L - used; ++k) count[remainders[size_t(k)].second]++;
  std::vector<int> out;
  for (const auto& [id, c] : count)
    for (long k = 0; k < c; ++k)
      out.push_back(m.space->types[size_t(id)].realizers.front());
  return out;
}

}  // namespace

ThetaLadderReport theta_ladder_check(const OrderArrayWitness& w, const Rat& eps,
                                     uint64_t seed) {
  std::string bad = check_order_witness(w);
  if (!bad.empty()) throw ValidationError("invalid order witness: " + bad);
  size_t n = w.mus.size();
  Rat approx_eps = eps / 16;

  const TypeSpace& phis = *w.mus[0].space;
  const TypeSpace& opps = *w.nus[0].space;

  // First the sampling route, which both certifies eps/16-approximability
  // and provides fallback tuples.
  std::vector<std::vector<int>> rows, cols;
  for (size_t i = 0; i < n; ++i) {
    ApproxResult a = epsilon_approximate(w.mus[i], opps, approx_eps,
                                         seed + uint64_t(i));
    if (!a.ok)
      throw ValidationError(
          "mu[" + std::to_string(i) +
          "] is not eps/16-approximable within the retry cap");
    rows.push_back(reduce_tuple(a.elements));
  }
  for (size_t j = 0; j < n; ++j) {
    ApproxResult a = epsilon_approximate(w.nus[j], phis, approx_eps,
                                         seed + uint64_t(n + j));
    if (!a.ok)
      throw ValidationError(
          "nu[" + std::to_string(j) +
          "] is not eps/16-approximable within the retry cap");
    cols.push_back(reduce_tuple(a.elements));
  }

  // theta needs one small common block size. Look for the least L whose
  // apportioned tuples all have verified deviation below eps/16; that keeps
  // the derived chain intact with far fewer positions than the sample count.
  size_t block = 0;
  for (int L = 1; L <= 10 && block == 0; ++L) {
    std::vector<std::vector<int>> cand_rows, cand_cols;
    bool all_ok = true;
    for (size_t i = 0; i < n && all_ok; ++i) {
      std::vector<int> t = apportioned_tuple(w.mus[i], L);
      all_ok = average_deviation(w.mus[i], opps, t) < approx_eps;
      cand_rows.push_back(std::move(t));
    }
    for (size_t j = 0; j < n && all_ok; ++j) {
      std::vector<int> t = apportioned_tuple(w.nus[j], L);
      all_ok = average_deviation(w.nus[j], phis, t) < approx_eps;
      cand_cols.push_back(std::move(t));
    }
    if (all_ok) {
      block = size_t(L);
      rows = std::move(cand_rows);
      cols = std::move(cand_cols);
    }
  }
  if (block == 0) {
    // fall back to the sampled tuples, aligned to a common length
    block = 1;
    for (const auto& t : rows) block = std::lcm(block, t.size());
    for (const auto& t : cols) block = std::lcm(block, t.size());
    if (block > 10)
      throw ValidationError("approximating tuples need block size " +
                            std::to_string(block) +
                            "; theta supports up to 10");
    for (auto& t : rows) t = repeat_tuple(t, block);
    for (auto& t : cols) t = repeat_tuple(t, block);
  }

  ThetaFormula theta = build_theta(int(block), w.r, w.eps);

  ThetaLadderReport rep;
  rep.block = int(block);
  rep.row_tuples = rows;
  rep.col_tuples = cols;
  rep.success = true;
  const AmbientRelation& rel = phis.rel;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      ThetaCell c = theta_cell_report(theta, rel, rows[i], cols[j], int(i),
                                      int(j), w.r, w.eps);
      if (!c.dichotomy_ok) rep.success = false;
      rep.cells.push_back(std::move(c));
    }
  return rep;
}

}  // namespace stabkit

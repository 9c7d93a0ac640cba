#include <doctest.h>

#include <random>

#include "stabkit/io.hpp"
#include "stabkit/stability.hpp"

#include "oracles.hpp"

using namespace stabkit;

namespace {

AmbientRelation random_rel(std::mt19937_64& gen, int max_x, int max_y) {
  int ux = 1 + int(gen() % uint64_t(max_x));
  int uy = 1 + int(gen() % uint64_t(max_y));
  std::vector<std::string> rows(size_t(ux), std::string(size_t(uy), '0'));
  for (auto& r : rows)
    for (auto& c : r) c = (gen() & 1) ? '1' : '0';
  return make_relation(rows);
}

AmbientRelation with_extra_row(const AmbientRelation& rel, uint64_t bits) {
  std::vector<std::string> rows;
  for (int a = 0; a < rel.u_x; ++a) {
    std::string s;
    for (int b = 0; b < rel.u_y; ++b) s.push_back(rel.entry(a, b) ? '1' : '0');
    rows.push_back(std::move(s));
  }
  std::string extra;
  for (int b = 0; b < rel.u_y; ++b) extra.push_back((bits >> b) & 1 ? '1' : '0');
  rows.push_back(std::move(extra));
  return make_relation(rows);
}

}  // namespace

TEST_CASE("ladder_index: constant relations have index 1") {
  for (const char* m : {"111", "000"}) {
    AmbientRelation rel = make_relation({m, m, m});
    LadderResult r = ladder_index(rel, 3);
    CHECK(r.n == 1);
    CHECK(!r.cap_reached);
    REQUIRE(r.witness.has_value());
    CHECK(check_ladder_witness(rel, *r.witness) == "");
  }
}

TEST_CASE("ladder_index: half graphs are full ladders with the plain witness") {
  for (int n = 2; n <= 8; ++n) {
    AmbientRelation rel = generate("half_graph(" + std::to_string(n) + ")");
    LadderResult r = ladder_index(rel, n);
    CHECK(r.n == n);
    CHECK(r.cap_reached);
    REQUIRE(r.witness.has_value());
    std::vector<int> expect(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) expect[size_t(i)] = i;
    CHECK(r.witness->rows == expect);
    CHECK(r.witness->cols == expect);
    CHECK(check_ladder_witness(rel, *r.witness) == "");
  }
  // uncapped value stays n: no longer ladder exists with distinct elements
  for (int n : {2, 4, 6}) {
    AmbientRelation rel = generate("half_graph(" + std::to_string(n) + ")");
    CHECK(ladder_index(rel, n + 3).n == n);
    CHECK(oracle::ladder_index(rel, n + 3) == n);
  }
}

TEST_CASE("ladder_index: equals the enumeration oracle on small relations") {
  std::mt19937_64 gen(3);
  for (int it = 0; it < 150; ++it) {
    AmbientRelation rel = random_rel(gen, 6, 6);
    int cap = 1 + int(gen() % 6);
    LadderResult r = ladder_index(rel, cap);
    CHECK(r.n == oracle::ladder_index(rel, cap));
    REQUIRE(r.witness.has_value());
    CHECK(int(r.witness->rows.size()) == r.n);
    CHECK(check_ladder_witness(rel, *r.witness) == "");
  }
}

TEST_CASE("ladder_index: transpose invariance") {
  std::mt19937_64 gen(5);
  for (int it = 0; it < 60; ++it) {
    AmbientRelation rel = random_rel(gen, 6, 6);
    int cap = std::min(rel.u_x, rel.u_y);
    CHECK(ladder_index(rel, cap).n == ladder_index(opposite(rel), cap).n);
  }
}

TEST_CASE("ladder_index: monotone under adding rows") {
  std::mt19937_64 gen(7);
  for (int it = 0; it < 40; ++it) {
    AmbientRelation rel = random_rel(gen, 5, 6);
    AmbientRelation bigger = with_extra_row(rel, gen());
    int cap = 6;
    CHECK(ladder_index(bigger, cap).n >= ladder_index(rel, cap).n);
  }
}

TEST_CASE("ladder_index: deterministic lexicographically least witness") {
  std::mt19937_64 gen(9);
  for (int it = 0; it < 30; ++it) {
    AmbientRelation rel = random_rel(gen, 5, 5);
    LadderResult a = ladder_index(rel, 5);
    LadderResult b = ladder_index(rel, 5);
    CHECK(a.witness->rows == b.witness->rows);
    CHECK(a.witness->cols == b.witness->cols);
  }
}

TEST_CASE("ladder_index: cap semantics") {
  AmbientRelation rel = generate("half_graph(8)");
  LadderResult r = ladder_index(rel, 3);
  CHECK(r.n == 3);
  CHECK(r.cap_reached);
  CHECK_THROWS_AS(ladder_index(rel, 0), ValidationError);
}

TEST_CASE("has_k_order_property") {
  AmbientRelation hg = generate("half_graph(6)");
  CHECK(has_k_order_property(hg, 6).has);
  CHECK(has_k_order_property(hg, 7).has == false);
  CHECK(!has_k_order_property(make_relation({"11", "11"}), 2).has);
  std::mt19937_64 gen(11);
  for (int it = 0; it < 10; ++it)
    CHECK(has_k_order_property(random_rel(gen, 4, 4), 1).has);
}

TEST_CASE("vc_dimension: fixed families") {
  CHECK(vc_dimension(make_relation({"111", "111"})).dim == 0);
  for (int n : {2, 4, 6, 8}) {
    AmbientRelation rel = generate("half_graph(" + std::to_string(n) + ")");
    VcResult v = vc_dimension(rel);
    CHECK(v.dim == 1);
    CHECK(v.dim == oracle::vc_dimension(rel));
  }
  for (int n : {1, 2, 3, 4}) {
    AmbientRelation rel = generate("full_subsets(" + std::to_string(n) + ")");
    CHECK(vc_dimension(rel).dim == n);
  }
  CHECK(vc_dimension(generate("half_graph(1)")).dim == 0);
}

TEST_CASE("vc_dimension: equals the subset-enumeration oracle") {
  std::mt19937_64 gen(13);
  for (int it = 0; it < 60; ++it) {
    AmbientRelation rel = random_rel(gen, 8, 6);
    VcResult v = vc_dimension(rel);
    CHECK(v.dim == oracle::vc_dimension(rel));
    // witness really shatters
    if (v.dim > 0) CHECK(oracle::shattered(rel, v.shattered));
    CHECK(int(v.shattered.size()) == v.dim);
  }
}

TEST_CASE("vc_dimension: log2 bound and row monotonicity") {
  std::mt19937_64 gen(17);
  for (int it = 0; it < 40; ++it) {
    AmbientRelation rel = random_rel(gen, 6, 6);
    std::set<std::string> distinct;
    for (int a = 0; a < rel.u_x; ++a) {
      std::string s;
      for (int b = 0; b < rel.u_y; ++b) s.push_back(rel.entry(a, b) ? '1' : '0');
      distinct.insert(s);
    }
    int d = vc_dimension(rel).dim;
    CHECK((size_t(1) << d) <= distinct.size());
    AmbientRelation bigger = with_extra_row(rel, gen());
    CHECK(vc_dimension(bigger).dim >= d);
  }
}

TEST_CASE("double_limit_estimate: constant grid") {
  std::vector<std::vector<Rat>> g(8, std::vector<Rat>(8, rat(3, 7)));
  DoubleLimitReport r = double_limit_estimate(g, rat(0));
  REQUIRE(r.inner_outer.has_value());
  REQUIRE(r.outer_inner.has_value());
  CHECK(*r.inner_outer == rat(3, 7));
  CHECK(*r.outer_inner == rat(3, 7));
  CHECK(*r.gap == 0);
}

TEST_CASE("double_limit_estimate: half-graph indicator grid shows gap 1") {
  int n = 16;
  std::vector<std::vector<Rat>> g(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[size_t(i)][size_t(j)] = Rat(i < j ? 1 : 0);
  DoubleLimitReport r = double_limit_estimate(g, rat(0));
  CHECK(r.inner_outer_converged);
  CHECK(r.outer_inner_converged);
  CHECK(*r.inner_outer == 0);  // column limits vanish, then stay 0
  CHECK(*r.outer_inner == 1);  // row limits reach 1
  CHECK(*r.gap == 1);
}

TEST_CASE("double_limit_estimate: validation") {
  std::vector<std::vector<Rat>> small(3, std::vector<Rat>(3, Rat(0)));
  CHECK_THROWS_AS(double_limit_estimate(small, rat(0)), ValidationError);
  std::vector<std::vector<Rat>> ragged(4, std::vector<Rat>(4, Rat(0)));
  ragged[2].pop_back();
  CHECK_THROWS_AS(double_limit_estimate(ragged, rat(0)), ValidationError);
  std::vector<std::vector<Rat>> fine(4, std::vector<Rat>(4, Rat(0)));
  CHECK_THROWS_AS(double_limit_estimate(fine, rat(-1, 2)), ValidationError);
}

TEST_CASE("double_limit_estimate: unconverged tails flagged") {
  // alternating rows: column sequences oscillate, and the per-row limits
  // exist but alternate, so neither iterated limit settles
  int n = 8;
  std::vector<std::vector<Rat>> g(static_cast<size_t>(n),
                                  std::vector<Rat>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[size_t(i)][size_t(j)] = Rat(i % 2);
  DoubleLimitReport r = double_limit_estimate(g, rat(1, 4));
  CHECK(!r.inner_outer_converged);
  CHECK(!r.outer_inner_converged);
  CHECK(!r.gap.has_value());

  // a step grid settles on both sides
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[size_t(i)][size_t(j)] = Rat(j >= 4 ? 1 : 0);
  DoubleLimitReport s = double_limit_estimate(g, rat(0));
  CHECK(s.inner_outer_converged);
  CHECK(s.outer_inner_converged);
  CHECK(*s.gap == 0);
}

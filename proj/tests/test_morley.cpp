#include <doctest.h>

#include <random>

#include "stabkit/io.hpp"
#include "stabkit/morley.hpp"

#include "oracles.hpp"

using namespace stabkit;

namespace {

struct Pair {
  AmbientRelation rel;
  TypeSpacePtr phis, opps;
};

Pair spaces_of(const AmbientRelation& rel) {
  return {rel, make_type_space(rel, Side::phi), make_type_space(rel, Side::opp)};
}

AmbientRelation random_rel(std::mt19937_64& gen, int max_n = 6) {
  int ux = 1 + int(gen() % uint64_t(max_n));
  int uy = 1 + int(gen() % uint64_t(max_n));
  std::vector<std::string> rows(size_t(ux), std::string(size_t(uy), '0'));
  for (auto& r : rows)
    for (auto& c : r) c = (gen() & 1) ? '1' : '0';
  return make_relation(rows);  // full sub-model: every type realized
}

KeislerMeasure random_measure(std::mt19937_64& gen, TypeSpacePtr sp) {
  std::map<int, Rat> w;
  long total = 0;
  std::vector<long> raw(size_t(sp->count()), 0);
  for (auto& x : raw) {
    x = long(gen() % 20);
    total += x;
  }
  if (total == 0) {
    raw[0] = 1;
    total = 1;
  }
  for (int i = 0; i < sp->count(); ++i)
    if (raw[size_t(i)]) w[i] = rat(raw[size_t(i)], total);
  return make_measure(sp, w);
}

}  // namespace

TEST_CASE("f_mu_values: dirac on a realized type is the matrix row") {
  std::mt19937_64 gen(3);
  for (int it = 0; it < 30; ++it) {
    Pair s = spaces_of(random_rel(gen));
    for (const PhiType& p : s.phis->types) {
      KeislerMeasure mu = dirac(s.phis, p.id);
      auto f = f_mu_values(mu, *s.opps);
      for (const PhiType& q : s.opps->types) {
        int a = p.realizers.front();
        int b = q.realizers.front();
        CHECK(f[q.id] == Rat(s.rel.entry(a, b) ? 1 : 0));
      }
    }
  }
}

TEST_CASE("f_mu_values: uniform measure gives column densities") {
  std::mt19937_64 gen(5);
  for (int it = 0; it < 20; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    std::vector<int> all(size_t(rel.u_x));
    for (int a = 0; a < rel.u_x; ++a) all[size_t(a)] = a;
    KeislerMeasure mu = average(s.phis, all);
    auto f = f_mu_values(mu, *s.opps);
    for (const PhiType& q : s.opps->types) {
      int b = q.realizers.front();
      CHECK(f[q.id] == rat(rel.col[size_t(b)].count(), rel.u_x));
    }
  }
}

TEST_CASE("f_mu_values: all-ones relation is constantly 1") {
  Pair s = spaces_of(make_relation({"111", "111"}));
  auto f = f_mu_values(dirac(s.phis, 0), *s.opps);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == 1);
}

TEST_CASE("f_mu_values: matches measure_of_formula on realized instances") {
  std::mt19937_64 gen(7);
  for (int it = 0; it < 30; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    KeislerMeasure mu = random_measure(gen, s.phis);
    auto f = f_mu_values(mu, *s.opps);
    rel.m_y.for_each([&](int b) {
      Rat direct = measure_of_formula(mu, f_atom(rel, Side::phi, b));
      CHECK(f[s.opps->type_of[size_t(b)]] == direct);
    });
  }
}

TEST_CASE("f_mu_values: undefinable weighted type reported") {
  AmbientRelation rel = make_relation({"11", "11", "10"}, {0, 1}, {0, 1});
  Pair s = spaces_of(rel);
  int bad_id = -1;
  for (const PhiType& t : s.phis->types)
    if (!t.definition) bad_id = t.id;
  REQUIRE(bad_id >= 0);
  KeislerMeasure mu = dirac(s.phis, bad_id);
  CHECK_THROWS_AS(f_mu_values(mu, *s.opps), UndefinableTypeError);
  try {
    f_mu_values(mu, *s.opps);
  } catch (const UndefinableTypeError& e) {
    REQUIRE(e.types.size() == 1);
    CHECK(e.types[0].type_id == bad_id);
    CHECK(e.types[0].side == Side::phi);
  }
}

TEST_CASE("morley_product: point masses on realized types hit the entry") {
  std::mt19937_64 gen(11);
  for (int it = 0; it < 30; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    for (const PhiType& p : s.phis->types)
      for (const PhiType& q : s.opps->types) {
        Rat v = morley_product(dirac(s.phis, p.id), dirac(s.opps, q.id));
        CHECK(v == Rat(rel.entry(p.realizers.front(), q.realizers.front())
                           ? 1
                           : 0));
      }
  }
}

TEST_CASE("morley_product: average x average equals the edge density") {
  std::mt19937_64 gen(13);
  for (int it = 0; it < 30; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    std::vector<int> rows, cols;
    for (int a = 0; a < rel.u_x; ++a)
      if (gen() & 1) rows.push_back(a);
    if (rows.empty()) rows.push_back(0);
    for (int b = 0; b < rel.u_y; ++b)
      if (gen() & 1) cols.push_back(b);
    if (cols.empty()) cols.push_back(0);

    Rat v = morley_product(average(s.phis, rows), average(s.opps, cols));
    long ones = 0;
    for (int a : rows)
      for (int b : cols)
        if (rel.entry(a, b)) ones++;
    CHECK(v == rat(ones, long(rows.size() * cols.size())));
  }
}

TEST_CASE("morley_product: dirac on the right evaluates mu at the column") {
  std::mt19937_64 gen(17);
  for (int it = 0; it < 30; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    KeislerMeasure mu = random_measure(gen, s.phis);
    rel.m_y.for_each([&](int b) {
      Rat v = morley_product(mu, dirac(s.opps, s.opps->type_of[size_t(b)]));
      CHECK(v == measure_of_formula(mu, f_atom(rel, Side::phi, b)));
    });
  }
}

TEST_CASE("evaluation_map: realized supports give the literal double sum") {
  std::mt19937_64 gen(19);
  for (int it = 0; it < 30; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    KeislerMeasure mu = random_measure(gen, s.phis);
    KeislerMeasure nu = random_measure(gen, s.opps);
    MorleyReport rep = evaluation_map(mu, nu);
    REQUIRE(rep.value_forward.has_value());
    Rat expect(0);
    for (const auto& [pid, r] : mu.weights)
      for (const auto& [qid, w] : nu.weights) {
        int a = s.phis->types[size_t(pid)].realizers.front();
        int b = s.opps->types[size_t(qid)].realizers.front();
        if (rel.entry(a, b)) expect += r * w;
      }
    CHECK(*rep.value_forward == expect);
    CHECK(*rep.value_backward == expect);
    CHECK(rep.commutes);
    CHECK(*rep.value_forward >= 0);
    CHECK(*rep.value_forward <= 1);
  }
}

TEST_CASE("evaluation_map: all-ones relation evaluates to (1,1,commutes)") {
  Pair s = spaces_of(make_relation({"11", "11"}));
  MorleyReport rep = evaluation_map(dirac(s.phis, 0), dirac(s.opps, 0));
  CHECK(*rep.value_forward == 1);
  CHECK(*rep.value_backward == 1);
  CHECK(rep.commutes);
}

TEST_CASE("evaluation_map: agreement with chi on point masses") {
  std::mt19937_64 gen(23);
  for (int it = 0; it < 20; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    for (const PhiType& p : s.phis->types)
      for (const PhiType& q : s.opps->types) {
        ChiResult c = chi_eval(*s.phis, *s.opps, p.id, q.id);
        MorleyReport rep = evaluation_map(dirac(s.phis, p.id),
                                          dirac(s.opps, q.id));
        CHECK(*rep.value_forward == c.forward);
        CHECK(*rep.value_backward == c.backward);
      }
  }
}

TEST_CASE("evaluation_map: exact bilinearity in the left argument") {
  std::mt19937_64 gen(29);
  for (int it = 0; it < 20; ++it) {
    AmbientRelation rel = random_rel(gen);
    Pair s = spaces_of(rel);
    KeislerMeasure m1 = random_measure(gen, s.phis);
    KeislerMeasure m2 = random_measure(gen, s.phis);
    KeislerMeasure nu = random_measure(gen, s.opps);
    Rat c = rat(long(gen() % 7), 7);
    // mix = c*m1 + (1-c)*m2
    std::map<int, Rat> mixed;
    for (const auto& [id, w] : m1.weights) mixed[id] += c * w;
    for (const auto& [id, w] : m2.weights) mixed[id] += (1 - c) * w;
    KeislerMeasure mix = make_measure(s.phis, mixed);
    Rat lhs = morley_product(mix, nu);
    Rat rhs = c * morley_product(m1, nu) + (1 - c) * morley_product(m2, nu);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("evaluation_map: undefinable support reported, values omitted") {
  AmbientRelation rel = make_relation({"11", "11", "10"}, {0, 1}, {0, 1});
  Pair s = spaces_of(rel);
  int bad_id = -1;
  for (const PhiType& t : s.phis->types)
    if (!t.definition) bad_id = t.id;
  REQUIRE(bad_id >= 0);
  MorleyReport rep = evaluation_map(dirac(s.phis, bad_id), dirac(s.opps, 0));
  CHECK(!rep.value_forward.has_value());
  CHECK(!rep.commutes);
  REQUIRE(rep.undefinable_types.size() == 1);
  CHECK(rep.undefinable_types[0].type_id == bad_id);
  CHECK_THROWS_AS(morley_product(dirac(s.phis, bad_id), dirac(s.opps, 0)),
                  UndefinableTypeError);
}

TEST_CASE("morley: mixed-pair and space checks") {
  Pair s = spaces_of(make_relation({"10", "01"}));
  Pair other = spaces_of(make_relation({"11", "01"}));
  CHECK_THROWS_AS(morley_product(dirac(s.phis, 0), dirac(other.opps, 0)),
                  ValidationError);
  CHECK_THROWS_AS(morley_product(dirac(s.opps, 0), dirac(s.opps, 0)),
                  ValidationError);
}

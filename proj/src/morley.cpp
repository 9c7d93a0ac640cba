#include "stabkit/morley.hpp"

namespace stabkit {

namespace {

void check_pair(const KeislerMeasure& mu, const KeislerMeasure& nu) {
  if (mu.space->side != Side::phi || nu.space->side != Side::opp)
    throw ValidationError("product wants a phi-measure and an opp-measure");
  if (!(mu.space->rel == nu.space->rel))
    throw ValidationError("product measures sit over different relations");
  if (!mu.space->definitions_filled || !nu.space->definitions_filled)
    throw ValidationError("product requires definitions to be filled");
}

std::vector<SideRef> undefinable_support(const KeislerMeasure& m) {
  std::vector<SideRef> bad;
  for (const auto& [id, w] : m.weights)
    if (!m.space->types[size_t(id)].definition)
      bad.push_back({m.space->side, id});
  return bad;
}

// Does type t of `of` satisfy the definition of type d (which lives on the
// opposite ground set)? Decided on any realizer.
bool satisfies_definition(const PhiType& t, const PhiType& d) {
  return d.definition->extension.test(t.realizers.front());
}

}  // namespace

std::map<int, Rat> f_mu_values(const KeislerMeasure& mu,
                               const TypeSpace& opp_space) {
  if (mu.space->side != Side::phi || opp_space.side != Side::opp)
    throw ValidationError("f_mu_values wants a phi-measure and an opp-space");
  if (!(mu.space->rel == opp_space.rel))
    throw ValidationError("f_mu_values spaces sit over different relations");
  if (!mu.space->definitions_filled)
    throw ValidationError("f_mu_values requires definitions to be filled");
  if (auto bad = undefinable_support(mu); !bad.empty())
    throw UndefinableTypeError(std::move(bad));

  std::map<int, Rat> out;
  for (const PhiType& q : opp_space.types) {
    Rat v(0);
    for (const auto& [pid, w] : mu.weights)
      if (satisfies_definition(q, mu.space->types[size_t(pid)])) v += w;
    out[q.id] = v;
  }
  return out;
}

Rat morley_product(const KeislerMeasure& mu, const KeislerMeasure& nu) {
  check_pair(mu, nu);
  std::vector<SideRef> bad = undefinable_support(mu);
  for (const SideRef& s : undefinable_support(nu)) bad.push_back(s);
  if (!bad.empty()) throw UndefinableTypeError(std::move(bad));

  std::map<int, Rat> f = f_mu_values(mu, *nu.space);
  Rat total(0);
  for (const auto& [qid, s] : nu.weights) total += s * f[qid];
  return total;
}

MorleyReport evaluation_map(const KeislerMeasure& mu,
                            const KeislerMeasure& nu) {
  check_pair(mu, nu);
  MorleyReport rep;
  rep.undefinable_types = undefinable_support(mu);
  for (const SideRef& s : undefinable_support(nu))
    rep.undefinable_types.push_back(s);
  if (!rep.undefinable_types.empty()) return rep;

  const TypeSpace& phis = *mu.space;
  const TypeSpace& opps = *nu.space;
  Rat fwd(0), bwd(0);
  for (const auto& [pid, r] : mu.weights) {
    const PhiType& p = phis.types[size_t(pid)];
    for (const auto& [qid, s] : nu.weights) {
      const PhiType& q = opps.types[size_t(qid)];
      if (satisfies_definition(q, p)) fwd += r * s;
      if (satisfies_definition(p, q)) bwd += r * s;
    }
  }
  rep.value_forward = fwd;
  rep.value_backward = bwd;
  rep.commutes = fwd == bwd;
  return rep;
}

}  // namespace stabkit

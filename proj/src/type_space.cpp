#include "stabkit/type_space.hpp"

#include <unordered_map>

namespace stabkit {

const PhiType& TypeSpace::type(int id) const {
  if (id < 0 || id >= int(types.size()))
    throw ValidationError("unknown type id " + std::to_string(id));
  return types[size_t(id)];
}

TypeSpace compute_type_space(const AmbientRelation& rel, Side side) {
  TypeSpace ts;
  ts.rel = rel;
  ts.side = side;

  const Bits& members = side == Side::phi ? rel.m_x : rel.m_y;
  std::vector<AlgebraAtom> atoms = atoms_of_algebra(rel, side);
  ts.type_of.assign(side == Side::phi ? rel.u_x : rel.u_y, -1);
  ts.types.reserve(atoms.size());
  for (auto& at : atoms) {
    PhiType t;
    t.id = int(ts.types.size());
    t.trace = at.signature;
    t.realizers = at.extension.to_indices();
    t.realized_in_m = at.extension.intersects(members);
    for (int e : t.realizers) ts.type_of[size_t(e)] = t.id;
    ts.types.push_back(std::move(t));
  }
  return ts;
}

TypeSpacePtr make_type_space(const AmbientRelation& rel, Side side) {
  auto ts = std::make_shared<TypeSpace>(compute_type_space(rel, side));
  fill_definitions(*ts);
  return ts;
}

DefinitionResult definition_of(const TypeSpace& ts, int type_id) {
  const PhiType& t = ts.type(type_id);
  Side opp_side = flip(ts.side);
  const Bits& params = ts.side == Side::phi ? ts.rel.m_y : ts.rel.m_x;

  DefinitionResult res;
  std::vector<Bits> chosen;
  for (const AlgebraAtom& at : atoms_of_algebra(ts.rel, opp_side)) {
    Bits in_m = at.extension & params;
    if (in_m.none()) continue;
    Bits hit = in_m & t.trace;
    if (hit.none()) continue;
    if (hit == in_m) {
      chosen.push_back(at.signature);
    } else {
      // Same opposite atom, trace decides its members differently.
      res.witness = {hit.first(), (in_m ^ hit).first()};
      return res;
    }
  }
  res.formula = formula_of_atom_signatures(ts.rel, opp_side, chosen);
  return res;
}

void fill_definitions(TypeSpace& ts) {
  for (PhiType& t : ts.types) {
    DefinitionResult r = definition_of(ts, t.id);
    t.definition = std::move(r.formula);
    t.undef_witness = r.witness;
  }
  ts.definitions_filled = true;
}

ChiResult chi_eval(const TypeSpace& phi_space, const TypeSpace& opp_space,
                   int p_id, int q_id) {
  if (phi_space.side != Side::phi || opp_space.side != Side::opp)
    throw ValidationError("chi_eval wants a phi-side and an opp-side space");
  if (!(phi_space.rel == opp_space.rel))
    throw ValidationError("chi_eval spaces sit over different relations");
  if (!phi_space.definitions_filled || !opp_space.definitions_filled)
    throw ValidationError("chi_eval requires definitions to be filled");

  const PhiType& p = phi_space.type(p_id);
  const PhiType& q = opp_space.type(q_id);
  if (!p.definition || !q.definition)
    throw ValidationError("chi_eval on an undefinable type");

  // Definition extensions live on the opposite ground set, so a single
  // realizer decides membership; all realizers agree by construction.
  ChiResult r;
  r.forward = p.definition->extension.test(q.realizers.front()) ? 1 : 0;
  r.backward = q.definition->extension.test(p.realizers.front()) ? 1 : 0;
  r.symmetric = r.forward == r.backward;
  return r;
}

}  // namespace stabkit

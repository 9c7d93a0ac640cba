#include "stabkit/measure.hpp"

#include <algorithm>

namespace stabkit {

KeislerMeasure make_measure(TypeSpacePtr space, std::map<int, Rat> weights) {
  if (!space) throw ValidationError("measure without a type space");
  KeislerMeasure mu;
  mu.space = std::move(space);
  Rat total(0);
  for (auto& [id, w] : weights) {
    mu.space->type(id);  // range check
    if (w < 0)
      throw ValidationError("negative weight on type " + std::to_string(id));
    if (w == 0) continue;
    total += w;
    mu.weights.emplace(id, w);
  }
  if (total != 1)
    throw ValidationError("weights sum to " + rat_str(total) + ", expected 1");
  return mu;
}

KeislerMeasure dirac(TypeSpacePtr space, int type_id) {
  std::map<int, Rat> w;
  w[type_id] = Rat(1);
  return make_measure(std::move(space), std::move(w));
}

KeislerMeasure average(TypeSpacePtr space, const std::vector<int>& elements) {
  if (!space) throw ValidationError("measure without a type space");
  if (elements.empty()) throw ValidationError("average of an empty list");
  std::map<int, long> counts;
  for (int e : elements) {
    if (e < 0 || e >= int(space->type_of.size()))
      throw ValidationError("element " + std::to_string(e) + " out of range");
    counts[space->type_of[size_t(e)]]++;
  }
  std::map<int, Rat> w;
  for (auto& [id, c] : counts) w[id] = rat(c, long(elements.size()));
  return make_measure(std::move(space), std::move(w));
}

std::vector<std::pair<int, Rat>> normal_form(const KeislerMeasure& mu) {
  std::vector<std::pair<int, Rat>> v(mu.weights.begin(), mu.weights.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return v;
}

Rat measure_of_formula(const KeislerMeasure& mu, const Formula& f) {
  const TypeSpace& ts = *mu.space;
  if (f.side != ts.side)
    throw ValidationError("formula side does not match the measure's space");
  if (f.extension.size() != int(ts.type_of.size()))
    throw ValidationError("formula ground set does not match the measure's");
  Rat total(0);
  for (const auto& [id, w] : mu.weights) {
    // Realizers of a type agree on every sub-model atom, hence on f.
    if (f.extension.test(ts.types[size_t(id)].realizers.front())) total += w;
  }
  return total;
}

Decomposition sobczyk_hammer_decompose(TypeSpacePtr space,
                                       const std::vector<Rat>& atom_values) {
  if (!space) throw ValidationError("decompose without a type space");
  if (int(atom_values.size()) != space->count())
    throw ValidationError("expected one value per atom (" +
                          std::to_string(space->count()) + "), got " +
                          std::to_string(atom_values.size()));
  Rat total(0);
  std::map<int, Rat> w;
  for (int i = 0; i < int(atom_values.size()); ++i) {
    if (atom_values[size_t(i)] < 0)
      throw ValidationError("negative atom value at " + std::to_string(i));
    total += atom_values[size_t(i)];
    if (atom_values[size_t(i)] > 0) w[i] = atom_values[size_t(i)];
  }
  if (total != 1)
    throw ValidationError("atom values sum to " + rat_str(total) +
                          ", expected 1");
  Decomposition d;
  d.atomic = make_measure(std::move(space), std::move(w));
  d.ordered = normal_form(d.atomic);
  d.residual_mass = Rat(0);
  return d;
}

Rat strong_continuity_deficit(const KeislerMeasure& mu) {
  Rat best(0);
  for (const auto& [id, w] : mu.weights)
    if (w > best) best = w;
  return best;
}

// ---------------------------------------------------------------------------
// 2-trees
// ---------------------------------------------------------------------------

namespace {

struct SplitProblem {
  std::vector<int> ids;      // ascending
  std::vector<Rat> weights;  // aligned with ids
  Rat total;
};

// Minimum achievable |sum(L) - sum(R)| over bipartitions into two nonempty
// sides. Branch and bound over atoms in descending weight order.
Rat min_imbalance(const SplitProblem& p) {
  size_t m = p.ids.size();
  std::vector<Rat> w = p.weights;
  std::sort(w.begin(), w.end(), std::greater<Rat>());
  std::vector<Rat> suffix(m + 1, Rat(0));
  for (size_t k = m; k-- > 0;) suffix[k] = suffix[k + 1] + w[k];

  Rat best = p.total;  // all on one side is not allowed, but bounds everything
  // diff = sum(L) - sum(R); first atom pinned to L.
  auto rec = [&](auto&& self, size_t k, const Rat& diff, bool r_used) -> void {
    if (k == m) {
      if (!r_used) return;
      Rat im = abs(diff);
      if (im < best) best = im;
      return;
    }
    Rat bound = abs(diff) - suffix[k];
    if (bound > best) return;
    if (diff <= 0) {
      self(self, k + 1, diff + w[k], r_used);
      self(self, k + 1, diff - w[k], true);
    } else {
      self(self, k + 1, diff - w[k], true);
      self(self, k + 1, diff + w[k], r_used);
    }
  };
  rec(rec, 1, w[0], false);
  return best;
}

// Lexicographically least assignment (atoms in id order, left before right)
// achieving the target imbalance. DFS visits assignments in lex order, so the
// first hit is the answer.
std::vector<bool> lex_split(const SplitProblem& p, const Rat& target) {
  size_t m = p.ids.size();
  std::vector<Rat> suffix(m + 1, Rat(0));
  for (size_t k = m; k-- > 0;) suffix[k] = suffix[k + 1] + p.weights[k];

  std::vector<bool> in_left(m, false);
  std::vector<bool> out;
  auto rec = [&](auto&& self, size_t k, const Rat& diff, bool r_used) -> bool {
    if (k == m) {
      if (r_used && abs(diff) == target) {
        out = in_left;
        return true;
      }
      return false;
    }
    if (abs(diff) - suffix[k] > target) return false;
    in_left[k] = true;
    if (self(self, k + 1, diff + p.weights[k], r_used)) return true;
    in_left[k] = false;
    return self(self, k + 1, diff - p.weights[k], true);
  };
  in_left[0] = true;
  rec(rec, 1, p.weights[0], false);
  return out;
}

Formula node_formula(const TypeSpace& ts, const std::vector<int>& atom_ids) {
  std::vector<Bits> sigs;
  sigs.reserve(atom_ids.size());
  for (int id : atom_ids) sigs.push_back(ts.types[size_t(id)].trace);
  return formula_of_atom_signatures(ts.rel, ts.side, sigs);
}

}  // namespace

TwoTree build_two_tree(const KeislerMeasure& mu, int max_depth) {
  const TypeSpace& ts = *mu.space;
  TwoTree tree;

  TwoTreeNode root;
  root.set = f_true(ts.rel, ts.side);
  root.measure = Rat(1);
  for (const auto& [id, w] : mu.weights) root.atom_ids.push_back(id);
  root.depth = 0;
  tree.nodes.push_back(std::move(root));

  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    // Nodes are appended in construction order; indices stay stable.
    if (tree.nodes[i].atom_ids.size() < 2) {
      tree.nodes[i].stop = TwoTreeNode::single_atom;
      continue;
    }
    if (tree.nodes[i].depth >= max_depth) {
      tree.nodes[i].stop = TwoTreeNode::depth_cap;
      continue;
    }

    SplitProblem p;
    p.ids = tree.nodes[i].atom_ids;
    p.total = Rat(0);
    for (int id : p.ids) {
      p.weights.push_back(mu.weight(id));
      p.total += p.weights.back();
    }
    Rat target = min_imbalance(p);
    std::vector<bool> in_left = lex_split(p, target);

    TwoTreeNode l, r;
    for (size_t k = 0; k < p.ids.size(); ++k)
      (in_left[k] ? l : r).atom_ids.push_back(p.ids[k]);
    for (TwoTreeNode* c : {&l, &r}) {
      c->set = node_formula(ts, c->atom_ids);
      c->measure = Rat(0);
      for (int id : c->atom_ids) c->measure += mu.weight(id);
      c->depth = tree.nodes[i].depth + 1;
    }
    tree.nodes[i].stop = TwoTreeNode::split;
    int li = int(tree.nodes.size());
    tree.nodes[i].left = li;
    tree.nodes[i].right = li + 1;
    if (tree.nodes[i].depth + 1 > tree.depth) tree.depth = tree.nodes[i].depth + 1;
    tree.nodes.push_back(std::move(l));
    tree.nodes.push_back(std::move(r));
  }
  return tree;
}

std::string check_two_tree(const TwoTree& tree, const KeislerMeasure& mu) {
  const TypeSpace& ts = *mu.space;
  if (tree.nodes.empty()) return "empty tree";
  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    const TwoTreeNode& n = tree.nodes[i];
    if (n.measure <= 0) return "node " + std::to_string(i) + " has measure <= 0";
    Rat sum(0);
    Bits atoms_ext(int(ts.type_of.size()));
    for (int id : n.atom_ids) {
      sum += mu.weight(id);
      for (int e : ts.types[size_t(id)].realizers) atoms_ext.set(e);
    }
    if (sum != n.measure)
      return "node " + std::to_string(i) + " measure mismatch";
    if (i > 0 && !(n.set.extension == atoms_ext))
      return "node " + std::to_string(i) + " formula does not match its atoms";
    if ((n.left >= 0) != (n.right >= 0))
      return "node " + std::to_string(i) + " has exactly one child";
    if (n.left >= 0) {
      const TwoTreeNode& l = tree.nodes[size_t(n.left)];
      const TwoTreeNode& r = tree.nodes[size_t(n.right)];
      if (!l.set.extension.is_subset_of(n.set.extension) ||
          !r.set.extension.is_subset_of(n.set.extension))
        return "child of node " + std::to_string(i) + " escapes its parent";
      if (l.set.extension.intersects(r.set.extension))
        return "children of node " + std::to_string(i) + " overlap";
    }
  }
  // Incomparable nodes must be disjoint. Containment is decided by the
  // ancestor relation, so compare extensions pairwise against it.
  std::vector<int> parent(tree.nodes.size(), -1);
  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    const TwoTreeNode& n = tree.nodes[i];
    if (n.left >= 0) parent[size_t(n.left)] = int(i);
    if (n.right >= 0) parent[size_t(n.right)] = int(i);
  }
  auto is_ancestor = [&](size_t a, size_t d) {
    for (int k = int(d); k >= 0; k = parent[size_t(k)])
      if (size_t(k) == a) return true;
    return false;
  };
  for (size_t a = 0; a < tree.nodes.size(); ++a)
    for (size_t b = a + 1; b < tree.nodes.size(); ++b) {
      if (is_ancestor(a, b) || is_ancestor(b, a)) continue;
      if (tree.nodes[a].set.extension.intersects(tree.nodes[b].set.extension))
        return "incomparable nodes " + std::to_string(a) + "," +
               std::to_string(b) + " intersect";
    }
  return "";
}

}  // namespace stabkit

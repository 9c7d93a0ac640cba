#pragma once

#include <map>
#include <optional>
#include <vector>

#include "stabkit/measure.hpp"

namespace stabkit {

struct SideRef {
  Side side = Side::phi;
  int type_id = -1;
  bool operator==(const SideRef&) const = default;
};

/// A weighted type with no definition blocks definition-based evaluation.
struct UndefinableTypeError : std::runtime_error {
  explicit UndefinableTypeError(std::vector<SideRef> t)
      : std::runtime_error("measure support contains undefinable types"),
        types(std::move(t)) {}
  std::vector<SideRef> types;
};

/// The definition-induced function of a phi-side measure on the opposite type
/// space: value at q is the total weight of the support types whose
/// definitions q satisfies. For a type realized by b this equals
/// mu(phi(x,b)). Throws UndefinableTypeError when a weighted type has no
/// definition.
std::map<int, Rat> f_mu_values(const KeislerMeasure& mu,
                               const TypeSpace& opp_space);

/// The product of a phi-measure with an opp-measure evaluated at the relation:
/// the finite integral of f_mu_values against nu.
Rat morley_product(const KeislerMeasure& mu, const KeislerMeasure& nu);

struct MorleyReport {
  std::optional<Rat> value_forward;   // (mu (x) nu)
  std::optional<Rat> value_backward;  // (nu (x) mu)
  bool commutes = false;
  std::vector<SideRef> undefinable_types;
};

/// Evaluates the product in both orders through the two double-sum forms and
/// records whether they agree. Undefinable support types are listed and the
/// values omitted instead of throwing. Asymmetry is a diagnostic outcome, not
/// an error.
MorleyReport evaluation_map(const KeislerMeasure& mu, const KeislerMeasure& nu);

}  // namespace stabkit

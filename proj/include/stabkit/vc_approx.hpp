#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stabkit/measure.hpp"

namespace stabkit {

/// Sample count sufficient for an eps-approximation of a measure over a set
/// system of VC dimension d: ceil((8/eps^2) * (d * ln(16/eps) + ln 16)).
/// Monotone nonincreasing in eps and nondecreasing in d.
int sample_size_bound(int d, const Rat& eps);

struct ApproxOptions {
  int max_attempts = 16;
  std::optional<int> sample_override;  // replaces the VC-derived sample count
};

struct ApproxResult {
  bool ok = false;
  std::vector<int> elements;  // sampled ambient elements, draw order
  Rat deviation;              // exact, verified over every ambient instance
  int attempts = 0;
  int samples = 0;
};

/// Draws realizer-weighted samples of mu (a type with probability its weight,
/// then one of its realizers uniformly), forms the counting average, and
/// verifies the exact deviation against mu over every ambient instance on the
/// opposite side. mu's value at an instance realized outside the sub-model is
/// taken through the support definitions, so every weighted type must be
/// definable. Redraws with an incremented seed until the deviation is below
/// eps or max_attempts is exhausted; on failure the best draw is reported.
/// Deterministic for fixed inputs and seed.
ApproxResult epsilon_approximate(const KeislerMeasure& mu,
                                 const TypeSpace& opp_space, const Rat& eps,
                                 uint64_t seed, const ApproxOptions& opts = {});

/// Exact supremum deviation of the counting average of `elements` from mu
/// over every ambient instance on the opposite side. The verification half of
/// epsilon_approximate, reusable on any candidate tuple.
Rat average_deviation(const KeislerMeasure& mu, const TypeSpace& opp_space,
                      const std::vector<int>& elements);

}  // namespace stabkit

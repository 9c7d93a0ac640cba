#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace stabkit {

/// Exact rational scalar. All measure weights, measure values and report
/// thresholds are carried as Rat; floating point is confined to the sampling
/// bound in vc_approx.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "a/b", "a", or a plain decimal like "0.25".
Rat rat_parse(const std::string& s);

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline double rat_double(const Rat& q) { return q.get_d(); }

}  // namespace stabkit

#include "stabkit/vc_approx.hpp"

#include <cmath>
#include <random>

#include "stabkit/morley.hpp"
#include "stabkit/stability.hpp"

namespace stabkit {

int sample_size_bound(int d, const Rat& eps) {
  if (d < 0) throw ValidationError("VC dimension must be nonnegative");
  if (eps <= 0 || eps >= 1) throw ValidationError("eps must lie in (0,1)");
  double e = rat_double(eps);
  double v = (8.0 / (e * e)) * (d * std::log(16.0 / e) + std::log(16.0));
  if (v > 1e7)
    throw ValidationError("sample bound exceeds the supported size");
  return int(std::ceil(v));
}

namespace {

// Value of mu at every ambient instance of the opposite side, through the
// support definitions. Inside the sub-model this agrees with the trace sum.
std::vector<Rat> instance_targets(const KeislerMeasure& mu,
                                  const TypeSpace& opp_space) {
  const TypeSpace& ts = *mu.space;
  if (opp_space.side != flip(ts.side) || !(opp_space.rel == ts.rel))
    throw ValidationError("approximation spaces do not match");
  std::map<int, Rat> by_type;
  for (const PhiType& q : opp_space.types) {
    Rat v(0);
    for (const auto& [pid, w] : mu.weights) {
      const PhiType& p = ts.types[size_t(pid)];
      if (!p.definition) throw UndefinableTypeError({{ts.side, pid}});
      if (p.definition->extension.test(q.realizers.front())) v += w;
    }
    by_type[q.id] = v;
  }
  std::vector<Rat> target(opp_space.type_of.size());
  for (size_t b = 0; b < target.size(); ++b)
    target[b] = by_type[opp_space.type_of[b]];
  return target;
}

Rat deviation_of_counts(const std::vector<Rat>& target,
                        const std::vector<long>& count, long n_samples) {
  Rat dev(0);
  for (size_t b = 0; b < target.size(); ++b) {
    Rat d = abs(target[b] - rat(count[b], n_samples));
    if (d > dev) dev = d;
  }
  return dev;
}

// Exact inverse-CDF pick: the 128-bit draw is compared against cumulative
// weights as a rational, so the type frequencies match the weights up to the
// 2^-128 discretization.
int pick_type(const std::vector<std::pair<int, Rat>>& cdf, std::mt19937_64& g) {
  mpz_class num(g());
  num <<= 64;
  num += mpz_class(g());
  Rat u(num);
  u /= Rat(mpz_class(1) << 128);
  for (const auto& [id, cum] : cdf)
    if (u < cum) return id;
  return cdf.back().first;
}

}  // namespace

Rat average_deviation(const KeislerMeasure& mu, const TypeSpace& opp_space,
                      const std::vector<int>& elements) {
  if (elements.empty()) throw ValidationError("empty tuple");
  const TypeSpace& ts = *mu.space;
  std::vector<Rat> target = instance_targets(mu, opp_space);
  std::vector<long> count(target.size(), 0);
  for (int e : elements) {
    const Bits& line =
        ts.side == Side::phi ? ts.rel.row[size_t(e)] : ts.rel.col[size_t(e)];
    line.for_each([&](int b) { count[size_t(b)]++; });
  }
  return deviation_of_counts(target, count, long(elements.size()));
}

ApproxResult epsilon_approximate(const KeislerMeasure& mu,
                                 const TypeSpace& opp_space, const Rat& eps,
                                 uint64_t seed, const ApproxOptions& opts) {
  if (eps <= 0 || eps >= 1) throw ValidationError("eps must lie in (0,1)");
  const TypeSpace& ts = *mu.space;
  std::vector<Rat> target = instance_targets(mu, opp_space);

  int n_samples;
  if (opts.sample_override) {
    n_samples = *opts.sample_override;
    if (n_samples < 1) throw ValidationError("sample count must be positive");
  } else {
    int d = ts.side == Side::phi ? vc_dimension(ts.rel).dim
                                 : vc_dimension(opposite(ts.rel)).dim;
    n_samples = sample_size_bound(d, eps);
  }

  std::vector<std::pair<int, Rat>> cdf;
  {
    Rat cum(0);
    for (const auto& [id, w] : mu.weights) {
      cum += w;
      cdf.emplace_back(id, cum);
    }
  }

  ApproxResult best;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    std::mt19937_64 gen(seed + uint64_t(attempt));
    std::vector<int> elems;
    elems.reserve(static_cast<size_t>(n_samples));
    std::vector<long> count(target.size(), 0);
    for (int k = 0; k < n_samples; ++k) {
      int tid = cdf.size() == 1 ? cdf.front().first : pick_type(cdf, gen);
      const auto& reals = ts.types[size_t(tid)].realizers;
      int e = reals[size_t(gen() % reals.size())];
      elems.push_back(e);
      const Bits& line =
          ts.side == Side::phi ? ts.rel.row[size_t(e)] : ts.rel.col[size_t(e)];
      line.for_each([&](int b) { count[size_t(b)]++; });
    }
    Rat dev = deviation_of_counts(target, count, n_samples);
    if (attempt == 0 || dev < best.deviation) {
      best.elements = std::move(elems);
      best.deviation = dev;
    }
    best.attempts = attempt + 1;
    best.samples = n_samples;
    if (best.deviation < eps) {
      best.ok = true;
      return best;
    }
  }
  best.ok = false;
  return best;
}

}  // namespace stabkit

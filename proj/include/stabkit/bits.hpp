#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace stabkit {

/// Fixed-width dynamic bitset. The width is chosen at construction and all
/// operands of a binary operation must have equal width. Bits past the width
/// are kept zero so that word-wise comparisons and popcounts stay valid.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_(words_for(n), 0) {}

  static Bits all(int n) {
    Bits b(n);
    for (auto& w : b.w_) w = ~0ull;
    b.trim();
    return b;
  }

  int size() const { return n_; }

  bool test(int i) const {
    assert(i >= 0 && i < n_);
    return (w_[i >> 6] >> (i & 63)) & 1;
  }
  void set(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] |= 1ull << (i & 63);
  }
  void reset(int i) {
    assert(i >= 0 && i < n_);
    w_[i >> 6] &= ~(1ull << (i & 63));
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  Bits& operator&=(const Bits& o) {
    assert(n_ == o.n_);
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    assert(n_ == o.n_);
    for (size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  Bits& operator^=(const Bits& o) {
    assert(n_ == o.n_);
    for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
  friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }

  /// Complement within the declared width.
  Bits flipped() const {
    Bits r(n_);
    for (size_t k = 0; k < w_.size(); ++k) r.w_[k] = ~w_[k];
    r.trim();
    return r;
  }

  bool is_subset_of(const Bits& o) const {
    assert(n_ == o.n_);
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  bool intersects(const Bits& o) const {
    assert(n_ == o.n_);
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  bool operator==(const Bits& o) const = default;

  /// Index of the first set bit at or after `i`, or -1.
  int next(int i) const {
    if (i >= n_) return -1;
    if (i < 0) i = 0;
    size_t k = i >> 6;
    uint64_t w = w_[k] & (~0ull << (i & 63));
    while (true) {
      if (w) return int((k << 6) + std::countr_zero(w));
      if (++k == w_.size()) return -1;
      w = w_[k];
    }
  }
  int first() const { return next(0); }

  template <typename F>
  void for_each(F&& f) const {
    for (int i = first(); i >= 0; i = next(i + 1)) f(i);
  }

  std::vector<int> to_indices() const {
    std::vector<int> v;
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

  uint64_t hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ uint64_t(n_);
    for (auto w : w_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  static size_t words_for(int n) { return (size_t(n) + 63) / 64; }
  void trim() {
    if (n_ & 63) w_.back() &= (~0ull) >> (64 - (n_ & 63));
    if (n_ == 0) w_.clear();
  }

  int n_ = 0;
  std::vector<uint64_t> w_;
};

struct BitsHash {
  size_t operator()(const Bits& b) const { return size_t(b.hash()); }
};

}  // namespace stabkit

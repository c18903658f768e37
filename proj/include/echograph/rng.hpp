#pragma once

// Self-contained deterministic random utilities. Every stochastic stage of
// the pipeline draws from these instead of <random> so that results are
// bit-reproducible across platforms and standard-library versions.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace echograph {

// One SplitMix64 step. Used for seeding and stateless hashing.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive mix of up to three words into one 64-bit seed.
// hash_seed(a,b,c) != hash_seed(a,c,b) in general, which is what lets
// independent streams be derived per (seed, node, walk_index) and similar.
inline std::uint64_t hash_seed(std::uint64_t a, std::uint64_t b = 0,
                               std::uint64_t c = 0) {
  std::uint64_t s = a;
  std::uint64_t h = splitmix64_next(s);
  s = h ^ (b * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL);
  h = splitmix64_next(s);
  s = h ^ (c * 0xc4ceb9fe1a85ec53ULL + 0x9e3779b97f4a7c15ULL);
  return splitmix64_next(s);
}

// xoshiro256** engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64_next(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased integer in [0, bound). Lemire multiply-with-rejection.
  std::uint32_t below(std::uint32_t bound) {
    assert(bound > 0);
    std::uint32_t x = static_cast<std::uint32_t>(next_u64());
    std::uint64_t m = static_cast<std::uint64_t>(x) * bound;
    auto lo = static_cast<std::uint32_t>(m);
    if (lo < bound) {
      const std::uint32_t threshold = (0u - bound) % bound;
      while (lo < threshold) {
        x = static_cast<std::uint32_t>(next_u64());
        m = static_cast<std::uint64_t>(x) * bound;
        lo = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  std::size_t index(std::size_t bound) {
    assert(bound > 0 && bound <= 0xffffffffULL);
    return below(static_cast<std::uint32_t>(bound));
  }

  // Uniform double in [0, 1), 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool bernoulli(double p) { return unit() < p; }

  // Standard normal via Marsaglia's polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * unit() - 1.0;
      v = 2.0 * unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Vose alias table for O(1) sampling from a fixed discrete distribution.
// Zero-weight entries are never returned.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0 || !std::isfinite(w)) {
        throw std::invalid_argument("alias table: weights must be finite and >= 0");
      }
      total += w;
    }
    if (n == 0 || total <= 0.0) {
      throw std::invalid_argument("alias table: need a positive total weight");
    }
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;
    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      small.pop_back();
      const std::uint32_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;  // numerical leftovers
  }

  bool empty() const { return prob_.empty(); }
  std::size_t size() const { return prob_.size(); }

  std::size_t sample(Rng& rng) const {
    assert(!prob_.empty());
    const std::size_t i = rng.index(prob_.size());
    return rng.unit() < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace echograph

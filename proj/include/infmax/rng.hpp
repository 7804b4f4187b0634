#pragma once

#include <cmath>
#include <cstdint>

namespace infmax {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: output i is a pure function of (key, i), so a
// stream can be split into independent substreams by key derivation alone.
// The output function is the splitmix64 finalizer over a Weyl sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  std::uint64_t next() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  // 53-bit uniform in [0, 1)
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // unbiased uniform integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) {
    // rejection from the top to avoid modulo bias
    std::uint64_t threshold = -bound % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_coin() {
    if (coin_left_ == 0) {
      coin_bits_ = next();
      coin_left_ = 64;
    }
    bool b = coin_bits_ & 1;
    coin_bits_ >>= 1;
    --coin_left_;
    return b;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t coin_bits_ = 0;
  int coin_left_ = 0;
};

// Substream key derivation. Streams for distinct (seed, a, b, c) never
// collide in practice; all randomness in the project flows through here.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t c = 0) {
  std::uint64_t k = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  k = mix64(k ^ a);
  k = mix64(k ^ b);
  k = mix64(k ^ c);
  return k;
}

inline Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
  return Rng(substream_key(seed, a, b, c));
}

// Stream tags keep the substream spaces of unrelated components apart.
namespace stream_tag {
constexpr std::uint64_t kSampler = 0x53414d50;      // block-pair edge sampling
constexpr std::uint64_t kWalk = 0x57414c4b;         // 1-d walk trials
constexpr std::uint64_t kWalk2d = 0x32445721;       // free 2-d walk trials
constexpr std::uint64_t kCoupling = 0x434f5550;     // coupled trials
constexpr std::uint64_t kCascadeIc = 0x49434153;    // independent-cascade percolation
constexpr std::uint64_t kSigma = 0x5349474d;        // sigma Monte Carlo trials
constexpr std::uint64_t kHTable = 0x4854424c;       // h-value estimation
constexpr std::uint64_t kProfile = 0x50524f46;      // common-random-number hit profile
}  // namespace stream_tag

double standard_normal(Rng& rng);
double gamma_variate(Rng& rng, double shape);

// Exact-distribution Poisson: inversion by sequential search below mean 10,
// Hormann's transformed-rejection PTRD above (not a normal approximation).
std::int64_t poisson(Rng& rng, double mean);

// Exact-distribution Binomial(n, p); handles n up to ~1e15 via recursive
// splitting on a Beta-distributed median order statistic.
std::uint64_t binomial(Rng& rng, std::uint64_t n, double p);

}  // namespace infmax

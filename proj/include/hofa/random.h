#ifndef HOFA_RANDOM_H_
#define HOFA_RANDOM_H_

#include <cstdint>
#include <random>

namespace hofa {

using Rng = std::mt19937_64;

// Independent, reproducible generator for (seed, stream). Streams let one call
// split work into per-trial generators without sharing state.
inline Rng make_rng(uint64_t seed, uint64_t stream = 0) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

inline uint32_t uniform_below(Rng& rng, uint32_t bound) {
  return std::uniform_int_distribution<uint32_t>(0, bound - 1)(rng);
}

inline double uniform_unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace hofa

#endif  // HOFA_RANDOM_H_

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace csaf::rng {

// splitmix64 finalizer
constexpr std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Substream id: fold every part into the seed, one mix per part. Streams
// derived from distinct part tuples are independent for practical purposes,
// which makes generation order and parallel schedules irrelevant.
constexpr std::uint64_t substream(std::uint64_t seed,
                                  std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t p : parts) h = mix(h ^ mix(p + 0x9e3779b97f4a7c15ULL));
  return h;
}

class SplitMix64 {
public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [0, bound), unbiased
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

private:
  std::uint64_t state_;
};

// First `count` elements of a uniform without-replacement draw from 0..pool-1
// (partial Fisher-Yates), returned sorted ascending.
inline std::vector<std::size_t> sample_without_replacement(SplitMix64& stream,
                                                           std::size_t pool,
                                                           std::size_t count) {
  std::vector<std::size_t> indices(pool);
  for (std::size_t i = 0; i < pool; ++i) indices[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + stream.next_below(pool - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  std::sort(indices.begin(), indices.end());
  return indices;
}

}  // namespace csaf::rng

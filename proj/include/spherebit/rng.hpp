// rng.hpp -- deterministic splittable random streams.
#pragma once

#include <cstdint>
#include <random>

namespace spherebit {

// A random stream that can be split into independent substreams by key.
// Splitting derives the child from (stream id, key) alone, never from the
// parent's consumption state, so parallel workers can be handed
// scheduling-independent streams: split(k) yields the same stream no matter
// how much the parent has been used.
//
// All draws are bit-reproducible across platforms: the engine is
// std::mt19937_64 (standardized output) and the double-valued draws below
// avoid the implementation-defined std::*_distribution adaptors.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Independent substream addressed by (this stream, key).
  [[nodiscard]] RandomStream split(std::uint64_t key) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Standard normal (Box-Muller; second value cached).
  double normal();

  [[nodiscard]] std::uint64_t stream_id() const { return id_; }

 private:
  std::uint64_t id_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace spherebit

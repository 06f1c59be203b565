// sampling.hpp -- point-set generators: i.i.d. uniform and jittered
// (one uniform point per cell of a regular partition).
#pragma once

#include <cstdint>

#include "spherebit/onebit.hpp"
#include "spherebit/partition.hpp"

namespace spherebit {

// N i.i.d. uniform points. The seed expands into one substream per point,
// so generation order (or parallelization) cannot change the output.
PointSet random_set(int d, std::int64_t N, std::uint64_t seed);

// One uniform point per cell of the regular partition with N cells; output
// in cell-index order. Per-cell substreams are derived from the seed.
PointSet jittered_set(int d, std::int64_t N, std::uint64_t seed);

// Process-wide partition cache keyed by (d, N); experiments sweep hundreds
// of seeds over the same partition.
const Partition& cached_partition(int d, std::int64_t N);

}  // namespace spherebit

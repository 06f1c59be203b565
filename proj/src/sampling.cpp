#include "spherebit/sampling.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace spherebit {

PointSet random_set(int d, std::int64_t N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("random_set: requires N >= 1");
  const RandomStream root(seed);
  const auto width = static_cast<std::size_t>(d) + 1;
  std::vector<double> flat(static_cast<std::size_t>(N) * width);
  for (std::int64_t k = 0; k < N; ++k) {
    RandomStream rs = root.split(static_cast<std::uint64_t>(k));
    geom::fill_uniform(d, rs,
                       std::span<double>(flat).subspan(
                           static_cast<std::size_t>(k) * width, width));
  }
  PointSetMeta meta;
  meta.method = PointSetMeta::Method::random;
  meta.seed = seed;
  return PointSet(d, std::move(flat), std::move(meta));
}

const Partition& cached_partition(int d, std::int64_t N) {
  static std::mutex mutex;
  static std::map<std::pair<int, std::int64_t>, std::unique_ptr<Partition>>
      cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{d, N}];
  if (!slot) slot = std::make_unique<Partition>(Partition::build(d, N));
  return *slot;
}

PointSet jittered_set(int d, std::int64_t N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("jittered_set: requires N >= 1");
  const Partition& part = cached_partition(d, N);
  const RandomStream root(seed);
  const auto width = static_cast<std::size_t>(d) + 1;
  std::vector<double> flat(static_cast<std::size_t>(N) * width);
  for (std::int64_t cell = 0; cell < N; ++cell) {
    RandomStream rs = root.split(static_cast<std::uint64_t>(cell));
    part.sample_span(cell, rs,
                     std::span<double>(flat).subspan(
                         static_cast<std::size_t>(cell) * width, width));
  }
  PointSetMeta meta;
  meta.method = PointSetMeta::Method::jittered;
  meta.seed = seed;
  meta.partition_cells = N;
  return PointSet(d, std::move(flat), std::move(meta));
}

}  // namespace spherebit

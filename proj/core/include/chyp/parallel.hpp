#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace chyp {

/// Engine for stream `stream` of a run seeded with `seed`. Streams are keyed
/// by task index, so results do not depend on how tasks are split over threads.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers, in contiguous
/// blocks. fn must only write to per-index state. The first exception thrown
/// by any worker is rethrown.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * block, hi = std::min(count, lo + block);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace chyp

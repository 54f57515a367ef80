// Deterministic block parallelism: work splits into fixed-size blocks that
// do not depend on the worker count, so per-block outputs (and any reduction
// done in block order) are identical for any number of workers.
#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace roughldp {

inline void parallel_blocks(std::size_t n_items, std::size_t block_size,
                            int workers,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n_items == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t n_blocks = (n_items + block_size - 1) / block_size;
  if (workers <= 1 || n_blocks == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const std::size_t lo = b * block_size;
      fn(lo, std::min(lo + block_size, n_items));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const std::size_t lo = b * block_size;
      fn(lo, std::min(lo + block_size, n_items));
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), n_blocks);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace roughldp

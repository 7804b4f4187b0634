#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace infmax {

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed-size
// chunks. Chunk boundaries do not depend on the thread count, so reductions
// stored per chunk and merged in chunk order are bitwise deterministic for
// any level of parallelism.
inline void parallel_chunks(std::uint64_t total, std::uint64_t chunk_size, int threads,
                            const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn) {
  if (total == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::uint64_t num_chunks = (total + chunk_size - 1) / chunk_size;
  if (threads <= 1 || num_chunks == 1) {
    for (std::uint64_t c = 0; c < num_chunks; ++c) {
      std::uint64_t b = c * chunk_size;
      std::uint64_t e = std::min(total, b + chunk_size);
      fn(c, b, e);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= num_chunks) return;
      std::uint64_t b = c * chunk_size;
      std::uint64_t e = std::min(total, b + chunk_size);
      fn(c, b, e);
    }
  };
  std::vector<std::thread> pool;
  int nw = threads;
  if (static_cast<std::uint64_t>(nw) > num_chunks) nw = static_cast<int>(num_chunks);
  pool.reserve(static_cast<std::size_t>(nw));
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace infmax

#pragma once

// Deterministic map-reduce over trial indices. Work is cut into fixed
// blocks (independent of the worker count); each block is reduced
// sequentially and block results are combined in block order, so the
// result is identical for any number of workers.

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace calibra {

constexpr std::int64_t kReduceBlock = 4096;

template <typename T, typename PerTrial, typename Combine>
T mapReduce(std::int64_t total, int workers, T init, PerTrial perTrial, Combine combine) {
  if (total <= 0) return init;
  const std::int64_t nBlocks = (total + kReduceBlock - 1) / kReduceBlock;
  std::vector<T> blockResults(static_cast<std::size_t>(nBlocks), init);
  std::atomic<std::int64_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= nBlocks) break;
      T acc = init;
      const std::int64_t lo = b * kReduceBlock;
      const std::int64_t hi = std::min(total, lo + kReduceBlock);
      for (std::int64_t i = lo; i < hi; ++i) acc = combine(acc, perTrial(i));
      blockResults[static_cast<std::size_t>(b)] = acc;
    }
  };
  if (workers <= 1 || nBlocks == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const int nThreads = std::min<std::int64_t>(workers, nBlocks);
    pool.reserve(nThreads);
    for (int t = 0; t < nThreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  T out = init;
  for (const T& r : blockResults) out = combine(out, r);
  return out;
}

}  // namespace calibra

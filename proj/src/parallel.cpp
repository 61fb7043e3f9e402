#include "psp/parallel.hpp"

#include <atomic>
#include <thread>

namespace psp {

namespace {

std::atomic<int> g_max_threads{0};
thread_local bool t_inside_worker = false;

int effective_threads() {
  int n = g_max_threads.load(std::memory_order_relaxed);
  if (n <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return n;
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n, std::memory_order_relaxed); }

int max_threads() { return effective_threads(); }

void parallel_blocks(std::int64_t count, std::int64_t block_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
  if (count <= 0) return;
  if (block_size <= 0) block_size = count;
  const std::int64_t nblocks = block_count(count, block_size);

  auto run_block = [&](std::int64_t b) {
    const std::int64_t lo = b * block_size;
    const std::int64_t hi = std::min(count, lo + block_size);
    fn(b, lo, hi);
  };

  const int threads = effective_threads();
  if (threads <= 1 || nblocks <= 1 || t_inside_worker) {
    for (std::int64_t b = 0; b < nblocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    t_inside_worker = true;
    for (std::int64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
      run_block(b);
    }
    t_inside_worker = false;
  };

  const int nworkers = static_cast<int>(std::min<std::int64_t>(threads, nblocks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nworkers) - 1);
  for (int t = 1; t < nworkers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double parallel_block_sum(std::int64_t count, std::int64_t block_size,
                          const std::function<double(std::int64_t, std::int64_t)>& block_fn) {
  if (count <= 0) return 0.0;
  if (block_size <= 0) block_size = count;
  const std::int64_t nblocks = block_count(count, block_size);
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
  parallel_blocks(count, block_size, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
    partial[static_cast<std::size_t>(b)] = block_fn(lo, hi);
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace psp

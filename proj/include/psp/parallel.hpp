#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace psp {

/// Caps the worker count used by parallel_blocks (0 = hardware concurrency).
void set_max_threads(int n);
int max_threads();

/// Splits [0, count) into consecutive blocks of block_size and runs
/// fn(block_index, lo, hi) for each, possibly on several threads. The block
/// layout depends only on (count, block_size), never on the thread count, so
/// per-block results are stable across any level of parallelism. Nested calls
/// from inside a worker run serially.
void parallel_blocks(std::int64_t count, std::int64_t block_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

inline std::int64_t block_count(std::int64_t count, std::int64_t block_size) {
  return (count + block_size - 1) / block_size;
}

/// Deterministic sum of per-block partials: blocks are filled in parallel and
/// combined in fixed index order.
double parallel_block_sum(std::int64_t count, std::int64_t block_size,
                          const std::function<double(std::int64_t, std::int64_t)>& block_fn);

}  // namespace psp

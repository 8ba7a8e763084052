#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace aperiodic {

// Worker pool size used by every internally parallel loop. Work is always
// split into blocks whose boundaries do not depend on this value, and partial
// results are combined in block order, so outputs are identical for any
// thread count.
std::size_t worker_threads();
void set_worker_threads(std::size_t n);

/// Fixed block length used for point-parallel reductions.
inline constexpr std::size_t kBlockSize = 2048;

/// Runs task(i) for i in [0, n). Nested calls run serially on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

/// Pairwise reduction in a fixed tree shape determined only by parts.size().
template <class T, class Combine>
T tree_reduce(std::vector<T> parts, T empty, Combine combine) {
  if (parts.empty()) return empty;
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next.push_back(combine(parts[i], parts[i + 1]));
    }
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

}  // namespace aperiodic

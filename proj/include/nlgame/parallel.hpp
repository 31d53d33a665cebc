#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace nlgame {

/// Runs body(begin, end) over a static partition of [0, count). Each index is
/// handled by exactly one call, so per-index results do not depend on `workers`.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  const std::size_t n = std::min<std::size_t>(std::max(1u, workers), count);
  if (n <= 1) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(n - 1);
  const std::size_t chunk = (count + n - 1) / n;
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(count, chunk));
}

}  // namespace nlgame

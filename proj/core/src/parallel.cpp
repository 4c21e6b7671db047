#include "mcim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mcim {

unsigned effective_threads(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
  }
  if (const char* cap = std::getenv("MCIM_THREADS")) {
    long v = std::strtol(cap, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return std::max(1u, n);
}

void parallel_chunks(
    std::uint64_t count, unsigned threads,
    const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body) {
  if (count == 0) return;
  threads = std::max(1u, threads);
  if (static_cast<std::uint64_t>(threads) > count)
    threads = static_cast<unsigned>(count);
  if (threads == 1) {
    body(0, 0, count);
    return;
  }
  const std::uint64_t chunk = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(count, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mcim

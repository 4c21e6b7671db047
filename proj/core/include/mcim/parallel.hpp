#pragma once

#include <cstdint>
#include <functional>

namespace mcim {

// Worker count actually used: `requested` if nonzero, otherwise the hardware
// concurrency, in both cases capped by the MCIM_THREADS environment variable.
unsigned effective_threads(unsigned requested = 0);

// Runs body(worker, begin, end) over a static partition of [0, count).
// Workers get contiguous chunks; with one worker the body runs inline.
void parallel_chunks(
    std::uint64_t count, unsigned threads,
    const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body);

}  // namespace mcim

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mbhalton::detail {

/// Worker count: explicit value if nonzero, else MBHALTON_THREADS, else 1.
inline unsigned resolve_threads(unsigned requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("MBHALTON_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    return 1;
}

/// Runs body(begin, end, worker) over contiguous chunks of [0, count).
template <typename Body>
void parallel_chunks(std::size_t count, unsigned threads, Body&& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t step = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        std::size_t b = w * step, e = std::min(count, b + step);
        if (b >= e)
            break;
        pool.emplace_back([&body, b, e, w] { body(b, e, w); });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace mbhalton::detail

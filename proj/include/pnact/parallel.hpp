#pragma once
#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace pnact {

// Run fn(0..count) across up to `threads` workers. Work items write to
// preassigned slots, so results are identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t w = 0; w < nt; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += nt) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace pnact

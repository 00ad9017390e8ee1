#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace itermax {

// Split [lo, hi] into fixed-size chunks, process them on `threads` workers
// pulling chunk indices from a shared counter, and return the per-chunk
// results in chunk order. The merge order never depends on the worker
// count, which keeps downstream output byte-stable. A throwing chunk stops
// the pool and the first exception is rethrown on the calling thread.
template <typename T, typename Fn>
std::vector<T> run_chunked(std::uint64_t lo, std::uint64_t hi, unsigned threads,
                           std::uint64_t chunk_size, Fn fn) {
    std::vector<T> results;
    if (lo > hi) return results;
    std::uint64_t total = hi - lo + 1;
    std::uint64_t chunks = (total + chunk_size - 1) / chunk_size;
    results.resize(chunks);
    if (threads <= 1 || chunks == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) {
            std::uint64_t a = lo + c * chunk_size;
            std::uint64_t b = std::min(hi, a + chunk_size - 1);
            results[c] = fn(a, b);
        }
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            std::uint64_t a = lo + c * chunk_size;
            std::uint64_t b = std::min(hi, a + chunk_size - 1);
            try {
                results[c] = fn(a, b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(chunks); // drain the queue
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

} // namespace itermax

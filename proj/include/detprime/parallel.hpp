#pragma once

// Block-parallel helpers. Work is cut into fixed blocks whose boundaries do
// not depend on the thread count, so per-block partial results can be
// reduced in index order and the final sum is reproducible for any number
// of workers.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace detprime {

inline int default_thread_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(block_index) for block_index in [0, num_blocks), distributing
// blocks over `threads` workers. Blocks may run in any order; callers that
// need determinism write into per-block slots and reduce afterwards.
template <class Fn>
void run_blocks(int64_t num_blocks, int threads, Fn&& fn) {
    if (num_blocks <= 0) return;
    if (threads <= 1 || num_blocks == 1) {
        for (int64_t b = 0; b < num_blocks; ++b) fn(b);
        return;
    }
    const int workers = static_cast<int>(std::min<int64_t>(threads, num_blocks));
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int64_t b = next.fetch_add(1);
                if (b >= num_blocks || failed.load()) break;
                try {
                    fn(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(first_error);
}

// Splits [begin, end) into blocks of `block_size` and returns the block
// count; block b covers [begin + b*block_size, min(end, ...)).
inline int64_t block_count(int64_t begin, int64_t end, int64_t block_size) {
    if (end <= begin) return 0;
    return (end - begin + block_size - 1) / block_size;
}

}  // namespace detprime

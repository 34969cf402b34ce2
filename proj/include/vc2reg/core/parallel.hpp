#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace vc2reg {

inline std::atomic<unsigned>& thread_limit_storage() {
    static std::atomic<unsigned> limit{0};
    return limit;
}

// 0 means "hardware concurrency".
inline void set_thread_limit(unsigned n) { thread_limit_storage() = n; }

inline unsigned thread_limit() {
    unsigned n = thread_limit_storage();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

// Runs f(i) for i in [0,n). Indices are handed out one at a time; callers write results by
// index, so the outcome never depends on scheduling. The first exception is rethrown.
inline bool& inside_worker() {
    thread_local bool flag = false;
    return flag;
}

// Nested calls from inside a worker run serially on that worker.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_limit(), n));
    if (workers <= 1 || inside_worker()) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            inside_worker() = true;
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next = n;
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace vc2reg

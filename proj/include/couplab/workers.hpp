#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace couplab {

/// Runs f(i) for i in [0, n) on `workers` threads. Work units must be
/// independent; callers store results by index so aggregation order never
/// depends on scheduling. If `interrupt` flips, no new units are dispatched
/// and in-flight units drain. Returns per-index completion flags.
inline std::vector<char> parallel_for(int n, int workers, const std::function<void(int)>& f,
                                      const std::atomic<bool>* interrupt = nullptr) {
    std::vector<char> done(static_cast<size_t>(n), 0);
    if (n == 0) return done;
    workers = std::max(1, std::min(workers, n));
    std::atomic<int> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mu;

    auto body = [&] {
        for (;;) {
            if (interrupt && interrupt->load()) return;
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
                done[static_cast<size_t>(i)] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return done;
}

} // namespace couplab

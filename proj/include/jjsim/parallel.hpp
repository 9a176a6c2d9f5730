#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace jjsim {

/// Runs fn(i) for i in [0, n) on up to n_threads workers. n_threads <= 1 runs
/// inline. Work is striped by index, so results keyed by i are deterministic
/// regardless of the thread count. The first exception thrown by any worker
/// is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, unsigned n_threads, Fn&& fn) {
    if (n == 0) return;
    if (n_threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(n_threads, n));
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&fn, &errors, w, workers, n] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

/// Thread budget from the environment variable `var`; falls back to the
/// hardware concurrency (at least 1) when unset or unparsable.
[[nodiscard]] inline unsigned thread_budget_from_env(const char* var = "JJSIM_THREADS") {
    const unsigned fallback = std::max(1u, std::thread::hardware_concurrency());
    const char* raw = std::getenv(var);
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    const long parsed = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || parsed < 1) return fallback;
    return static_cast<unsigned>(parsed);
}

}  // namespace jjsim

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace sidon {

/// Worker count used when the caller passes 0.
[[nodiscard]] inline unsigned default_workers() noexcept {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Splits [0, count) into `workers` contiguous ranges and calls
/// fn(begin, end, worker) for each, one thread per nonempty range. The first
/// exception thrown by any worker is rethrown after all threads join.
template <class Fn>
void parallel_ranges(std::uint64_t count, unsigned workers, Fn&& fn) {
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
    if (workers <= 1) {
        fn(std::uint64_t{0}, count, 0U);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::uint64_t chunk = count / workers;
    const std::uint64_t extra = count % workers;
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
        threads.emplace_back([&, begin, end, w] {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace sidon

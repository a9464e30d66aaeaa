#include "varlex/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace varlex {

void parallel_for(int64_t n, int jobs, const std::function<void(int64_t)>& fn) {
    if (n <= 0) return;
    if (jobs < 1) throw std::invalid_argument("parallel_for: requires jobs >= 1");
    const int workers = static_cast<int>(std::min<int64_t>(jobs, n));
    if (workers == 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const int64_t chunk = std::max<int64_t>(1, n / (8 * workers));
    auto body = [&]() {
        for (;;) {
            const int64_t start = next.fetch_add(chunk);
            if (start >= n) return;
            const int64_t stop = std::min(n, start + chunk);
            try {
                for (int64_t i = start; i < stop; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers - 1));
    for (int t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace varlex

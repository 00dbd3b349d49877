#include "gdiff/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gdiff {

std::size_t worker_count() {
    if (const char* env = std::getenv("GDIFF_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
            return static_cast<std::size_t>(v);
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = n;

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto body = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void blocked_accumulate(std::size_t n, std::size_t dim,
                        const std::function<void(std::size_t, double*)>& add,
                        double* out) {
    for (std::size_t j = 0; j < dim; ++j) out[j] = 0.0;
    if (n == 0) return;

    std::size_t n_blocks = (n + kAccumulateBlock - 1) / kAccumulateBlock;
    std::vector<double> partials(n_blocks * dim, 0.0);
    parallel_for(n_blocks, [&](std::size_t b) {
        double* acc = partials.data() + b * dim;
        std::size_t lo = b * kAccumulateBlock;
        std::size_t hi = std::min(n, lo + kAccumulateBlock);
        for (std::size_t i = lo; i < hi; ++i) add(i, acc);
    });
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const double* acc = partials.data() + b * dim;
        for (std::size_t j = 0; j < dim; ++j) out[j] += acc[j];
    }
}

}  // namespace gdiff

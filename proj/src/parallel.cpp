#include "driftlap/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace driftlap {

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    int budget = hw == 0 ? 1 : static_cast<int>(hw);
    if (const char* cap = std::getenv("DRIFTLAP_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(cap, &end, 10);
        if (end != cap && *end == '\0' && v >= 1)
            budget = std::min<long>(budget, v);
    }
    return budget;
}

void parallel_for_indexed(std::size_t count, const std::function<void(std::size_t)>& body) {
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        std::size_t lo = count * t / workers;
        std::size_t hi = count * (t + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace driftlap

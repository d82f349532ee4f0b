#pragma once

#include "fieldent/precision.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fieldent {

// Number of workers to use when the caller asks for 0 ("auto").
unsigned resolve_jobs(unsigned jobs);

// Runs body(i) for i in [0, count) on at most `jobs` threads. Every worker
// installs the given mp precision. The first exception thrown by any task
// is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, const PrecisionContext& ctx, Body&& body) {
    jobs = resolve_jobs(jobs);
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        ScopedPrecision sp(ctx);
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> threads;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    for (unsigned t = 0; t < n; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace fieldent

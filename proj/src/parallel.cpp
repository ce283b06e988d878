#include "tubeap/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace tubeap {

namespace {

std::atomic<unsigned> g_threads{0};

unsigned threads_from_env() {
    if (const char* env = std::getenv("TUBEAP_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (...) {
        }
    }
    return 1;
}

}  // namespace

void set_thread_count(unsigned threads) { g_threads.store(threads); }

unsigned thread_count() {
    unsigned n = g_threads.load();
    return n == 0 ? threads_from_env() : n;
}

void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n_tasks);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) task(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_tasks);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace tubeap

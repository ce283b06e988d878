#ifndef TUBEAP_PARALLEL_HPP
#define TUBEAP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace tubeap {

/// Number of worker threads used by data-parallel loops. Zero means "read TUBEAP_THREADS, else 1".
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs task(i) for i in [0, n_tasks). Tasks are independent and write to disjoint slots,
/// so results never depend on how tasks are distributed over threads.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task);

}  // namespace tubeap

#endif  // TUBEAP_PARALLEL_HPP

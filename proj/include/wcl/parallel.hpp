#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wcl {

inline int default_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count) on `jobs` threads with static striding.
// Each index must write only to its own output slot; results are then
// independent of the thread count. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const auto workers = static_cast<std::size_t>(jobs);
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace wcl

#pragma once

#include <atomic>

namespace invh {

/// Threads currently running verifier work on behalf of decide or a race.
int live_verifier_workers();

namespace detail {

std::atomic<int>& worker_counter();

class WorkerGuard {
 public:
  WorkerGuard() { worker_counter().fetch_add(1); }
  ~WorkerGuard() { worker_counter().fetch_sub(1); }
  WorkerGuard(const WorkerGuard&) = delete;
  WorkerGuard& operator=(const WorkerGuard&) = delete;
};

}  // namespace detail
}  // namespace invh

// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sisso {

/// Resolves a configured worker count; 0 means one per hardware thread.
inline unsigned resolve_workers(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(task, worker) for every task in [0, n_tasks) on up to `workers`
/// threads. Tasks are claimed in increasing order from a shared counter;
/// which worker runs which task is unspecified, so callers that need
/// deterministic output must key results by task, not by worker. The first
/// exception thrown by any task is rethrown after all workers joined.
template <typename Body>
void parallel_for(std::size_t n_tasks, unsigned workers, Body&& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), n_tasks));
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) body(t, 0u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&](unsigned worker) {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= n_tasks) return;
      try {
        body(t, worker);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) threads.emplace_back(run, w);
    run(0);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace sisso

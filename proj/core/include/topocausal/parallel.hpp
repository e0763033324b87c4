#pragma once

#include <cstddef>
#include <functional>

namespace topocausal {

// Environment variable consulted by default_workers().
inline constexpr const char* kWorkersEnv = "TOPOCAUSAL_WORKERS";

// Worker count from TOPOCAUSAL_WORKERS, else the hardware concurrency (>= 1).
unsigned default_workers();

// Resolves 0 to default_workers().
unsigned resolve_workers(unsigned requested);

// Calls body(i) for every i in [0, count) on up to `workers` threads.
// Work is handed out dynamically, so body must only write to slots owned by i.
// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace topocausal

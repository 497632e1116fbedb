#ifndef GDALLOC_PARALLEL_H_
#define GDALLOC_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace gdalloc {

// Environment variable read by DefaultThreadCount().
inline constexpr const char* kThreadsEnvVar = "GDALLOC_THREADS";

// GDALLOC_THREADS if set to a positive integer, else hardware concurrency.
int DefaultThreadCount();

// Calls body(k) for k in [0, count) on up to `threads` workers. Work is
// claimed dynamically, so callers must write results into per-index slots.
// If any call throws, the exception from the lowest index is rethrown.
void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& body);

}  // namespace gdalloc

#endif  // GDALLOC_PARALLEL_H_

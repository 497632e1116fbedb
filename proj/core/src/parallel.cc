#include "gdalloc/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace gdalloc {

int DefaultThreadCount() {
  if (const char* env = std::getenv(kThreadsEnvVar)) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& body) {
  if (count <= 0) return;
  const int workers =
      static_cast<int>(std::min<int64_t>(std::max(threads, 1), count));

  std::atomic<int64_t> next{0};
  std::mutex error_mutex;
  int64_t error_index = count;
  std::exception_ptr error;

  auto work = [&] {
    for (int64_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (k < error_index) {
          error_index = k;
          error = std::current_exception();
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace gdalloc

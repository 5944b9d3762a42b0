#ifndef ERGLAB_PARALLEL_HPP
#define ERGLAB_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace erglab {

// Worker cap from ERGLAB_THREADS (default 1). Parallelism is only ever
// applied across independent instances whose results land in preallocated
// slots; aggregation stays sequential, so the thread count never changes
// any output.
inline int worker_count() {
  const char* env = std::getenv("ERGLAB_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  const long hw = std::max(1u, std::thread::hardware_concurrency());
  if (v < 1) return 1;
  return static_cast<int>(std::min<long>(v, hw));
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int workers = worker_count();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = static_cast<std::size_t>(t); i < count;
             i += static_cast<std::size_t>(workers))
          fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace erglab

#endif

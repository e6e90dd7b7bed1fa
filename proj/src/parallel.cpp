#include "spinorforge/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spinorforge {

int worker_count() {
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char *s = std::getenv("SPINORFORGE_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  return hw;
}

void parallel_for(int n, const std::function<void(int)> &body) {
  int workers = std::min(worker_count(), n);
  if (workers <= 1 || n < 8) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex m;
  auto run = [&] {
    for (int k = next++; k < n; k = next++) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard lk(m);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto &t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

} // namespace spinorforge

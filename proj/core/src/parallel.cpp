#include "rwgc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace rwgc {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int n) { g_default_threads.store(n < 0 ? 0 : n); }

int default_threads() {
  const int configured = g_default_threads.load();
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int resolve_threads(int requested) {
  return requested > 0 ? requested : default_threads();
}

void parallel_for(std::int64_t begin, std::int64_t end, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;

  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    body(begin, end);
    return;
  }

  const std::int64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto run = [&](std::int64_t lo, std::int64_t hi) {
    try {
      body(lo, hi);
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };

  for (int w = 1; w < workers; ++w) {
    const std::int64_t lo = begin + w * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(run, lo, hi);
  }
  run(begin, std::min(end, begin + chunk));
  for (auto& t : pool) t.join();

  if (error) std::rethrow_exception(error);
}

}  // namespace rwgc

#include "fracpar/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace fracpar {

namespace {
std::atomic<int> g_thread_limit{0};  // 0 = unset, use hardware concurrency

int hardware_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}
}  // namespace

void set_thread_limit(int n) {
  g_thread_limit.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

int thread_limit() {
  int n = g_thread_limit.load(std::memory_order_relaxed);
  return n > 0 ? n : hardware_threads();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_limit()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi, w]() {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fracpar

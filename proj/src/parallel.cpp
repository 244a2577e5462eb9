#include "sdr/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sdr {

namespace {
std::atomic<int> g_thread_cap{0};

int hardware_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}
}  // namespace

void set_thread_count(int n) { g_thread_cap.store(n < 0 ? 0 : n); }

int thread_count() {
  const int cap = g_thread_cap.load();
  return cap == 0 ? hardware_threads() : cap;
}

void parallel_blocks(int n_blocks, const std::function<void(int)>& fn) {
  if (n_blocks <= 0) return;
  const int workers = std::min(thread_count(), n_blocks);
  if (workers <= 1) {
    for (int b = 0; b < n_blocks; ++b) fn(b);
    return;
  }

  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto run = [&]() {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sdr

#include "tfun/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tfun {

static std::atomic<int> g_workers{0};

int default_workers() {
  int n = g_workers.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void set_default_workers(int n) { g_workers.store(n); }

void parallel_for(uint64_t begin, uint64_t end, int workers,
                  const std::function<void(uint64_t, uint64_t)>& body) {
  if (begin >= end) return;
  int w = workers > 0 ? workers : default_workers();
  uint64_t n = end - begin;
  if (w <= 1 || n == 1) {
    body(begin, end);
    return;
  }
  uint64_t nw = std::min<uint64_t>(static_cast<uint64_t>(w), n);
  uint64_t chunk = (n + nw - 1) / nw;
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (uint64_t t = 0; t < nw; ++t) {
    uint64_t lo = begin + t * chunk;
    uint64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tfun

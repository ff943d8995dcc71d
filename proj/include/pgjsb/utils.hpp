// Small shared utilities: deterministic parallel map over an index range
// and the fixed-width numeric formatting used by every artifact writer.
#pragma once

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace pgjsb {

inline int hardware_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Worker cap: explicit argument wins, then PGJSB_THREADS, then the core
// count.
inline int resolve_workers(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PGJSB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return hardware_workers();
}

// Runs fn(i) for i in [0, count) on a small pool. Results must be written
// to preallocated, index-owned slots; the reduction order afterwards is up
// to the caller, which keeps outputs independent of scheduling.
inline void parallel_for(int count, int workers,
                         const std::function<void(int)>& fn) {
  workers = std::min(std::max(workers, 1), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// 10-significant-digit formatting shared by CSV and JSON emitters so that
// artifacts are reproducible byte for byte.
inline std::string format_g10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace pgjsb

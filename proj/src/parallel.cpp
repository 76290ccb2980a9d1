#include "glomap/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace glomap {

int worker_threads() {
  if (const char* env = std::getenv("GLOMAP_THREADS")) {
    int value = 0;
    const auto res = std::from_chars(env, env + std::strlen(env), value);
    if (res.ec == std::errc() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(Index begin, Index end, const std::function<void(Index)>& body) {
  const Index count = end - begin;
  if (count <= 0) return;
  const Index threads = std::min<Index>(worker_threads(), count);
  if (threads <= 1) {
    for (Index i = begin; i < end; ++i) body(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  const Index block = (count + threads - 1) / threads;
  for (Index t = 0; t < threads; ++t) {
    const Index lo = begin + t * block;
    const Index hi = std::min(end, lo + block);
    pool.emplace_back([&, lo, hi, t] {
      try {
        for (Index i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace glomap

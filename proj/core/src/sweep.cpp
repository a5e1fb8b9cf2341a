#include "qtoa/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

#include "qtoa/errors.hpp"

namespace qtoa {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QTOA_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0 && n < 1024) return static_cast<int>(n);
    throw ValidationError("QTOA_THREADS", "must be a positive integer");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<double> parallel_map(const std::vector<double>& xs,
                                 const std::function<double(double)>& f, int threads) {
  std::vector<double> out(xs.size());
  if (xs.empty()) return out;
  const int n_threads = std::min<int>(resolve_thread_count(threads),
                                      static_cast<int>(xs.size()));
  if (n_threads <= 1) {
    for (size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    return out;
  }

  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= xs.size() || failed.load()) return;
      try {
        out[i] = f(xs[i]);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_threads));
  for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
  return out;
}

}  // namespace qtoa

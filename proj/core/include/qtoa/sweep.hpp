#pragma once

#include <functional>
#include <vector>

namespace qtoa {

// Evaluates f over xs with a thread pool, writing results by index so the
// output is identical for any thread count.  threads = 0 resolves to the
// QTOA_THREADS environment variable if set, else hardware concurrency.
// Exceptions from f are rethrown on the calling thread.
std::vector<double> parallel_map(const std::vector<double>& xs,
                                 const std::function<double(double)>& f, int threads = 0);

int resolve_thread_count(int requested);

}  // namespace qtoa

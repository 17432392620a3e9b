#pragma once

#include <functional>

namespace regent {

/// Worker count: REGENT_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int thread_count();

/// Runs f(0), ..., f(n - 1) on up to thread_count() threads. The first exception
/// thrown by any call is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace regent

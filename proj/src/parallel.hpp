#pragma once

#include <exception>
#include <vector>

namespace roundabout::detail {

/// Runs fn(k) for k in [0, count). workers <= 1 is a plain loop on the
/// calling thread (the serial reference path); otherwise an OpenMP static
/// schedule. The exception from the lowest failing index is rethrown.
template <typename Fn>
void parallel_for(int workers, int count, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for num_threads(workers) schedule(static)
  for (int k = 0; k < count; ++k) {
    try {
      fn(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace roundabout::detail

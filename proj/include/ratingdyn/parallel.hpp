#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace ratingdyn {

// Every data-parallel kernel in the library takes one of these. `serial` is
// the reference path the tests compare the OpenMP path against; both must
// produce bitwise-identical results because work is assembled by index.
enum class Execution { serial, parallel };

// Runs body(i) for i in [0, n). Exceptions thrown inside the OpenMP region
// are captured per index and the one with the lowest index is rethrown.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int max_threads() noexcept;

}  // namespace ratingdyn

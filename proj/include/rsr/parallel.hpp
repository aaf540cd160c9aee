// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rsr {

/// Splits [0, count) into at most `workers` contiguous ranges of near-equal
/// size and calls fn(begin, end) once per range, the first range on the
/// calling thread. The first exception thrown by any range is rethrown.
template <class Fn>
void parallel_for_ranges(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  const std::size_t base = count / workers;
  const std::size_t extra = count % workers;
  auto range_begin = [&](std::size_t w) { return w * base + std::min(w, extra); };

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          fn(range_begin(w), range_begin(w + 1));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    try {
      fn(range_begin(0), range_begin(1));
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace rsr

/*
 * Copyright 2026 The uhlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef UHLAB_PARALLEL_HPP
#define UHLAB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace uhlab {

/// Splits [0, n) into `threads` contiguous chunks and runs
/// fn(chunk_id, begin, end) on each. Chunk boundaries depend only on n and
/// the thread count, so reductions over chunk results are reproducible.
/// The first exception thrown by any chunk is rethrown.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    fn(0, std::size_t{0}, n);
    return;
  }
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::exception_ptr> errs(t);
  std::vector<std::thread> pool;
  const std::size_t step = (n + t - 1) / t;
  for (std::size_t c = 0; c < t; ++c) {
    const std::size_t b = std::min(n, c * step), e = std::min(n, b + step);
    pool.emplace_back([&, c, b, e] {
      try {
        fn(static_cast<int>(c), b, e);
      } catch (...) {
        errs[c] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

/// out[i] = fn(i) for i in [0, n), evaluated on up to `threads` workers.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn&& fn) {
  std::vector<T> out(n);
  parallel_chunks(n, threads, [&](int, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = fn(i);
  });
  return out;
}

}  // namespace uhlab

#endif  // UHLAB_PARALLEL_HPP

// Copyright 2026 The latcf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LATCF_PARALLEL_HPP
#define LATCF_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace latcf::detail {

// Runs fn(chunk_index) for chunk_index in [0, nchunks) on up to `workers`
// threads. Each chunk writes only to its own output slot, and callers merge
// slots in index order, so results do not depend on the worker count.
template <typename Fn>
void parallel_chunks(std::int64_t nchunks, int workers, Fn&& fn) {
  if (workers <= 1 || nchunks <= 1) {
    for (std::int64_t c = 0; c < nchunks; ++c) fn(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::int64_t c; (c = next.fetch_add(1)) < nchunks;) fn(c);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  const int nthreads =
      static_cast<int>(std::min<std::int64_t>(workers, nchunks));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Compensated accumulator for long Monte Carlo sums.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace latcf::detail

#endif  // LATCF_PARALLEL_HPP

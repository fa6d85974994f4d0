// Copyright 2026 The Infodensity Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFODENSITY_PARALLEL_HPP_
#define INFODENSITY_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace infodensity {

inline std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Splits [0, n) into at most `workers` contiguous shards and runs
// fn(shard_index, begin, end) for each, one thread per shard. The shard
// layout depends only on (n, workers); the first exception is rethrown.
template <typename Fn>
std::size_t parallel_shards(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (n == 0) return 0;
  const std::size_t per = (n + workers - 1) / workers;
  const std::size_t shards = (n + per - 1) / per;
  if (shards == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return 1;
  }
  std::vector<std::exception_ptr> errors(shards);
  std::vector<std::thread> threads;
  threads.reserve(shards);
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t begin = s * per;
    const std::size_t end = std::min(n, begin + per);
    threads.emplace_back([&, s, begin, end] {
      try {
        fn(s, begin, end);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return shards;
}

// fn(i) for every i in [0, n); each index is visited exactly once.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  parallel_shards(n, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace infodensity

#endif  // INFODENSITY_PARALLEL_HPP_

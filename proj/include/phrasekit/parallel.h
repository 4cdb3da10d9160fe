// Copyright 2026 The Phrasekit Authors.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace phrasekit {

// Number of workers to use when the caller asked for `requested` (0 = all
// available cores).
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, n) into `shards` contiguous ranges and calls fn(shard, begin, end)
// for each, one worker thread per shard. Shard boundaries depend only on n and
// the shard count, so callers that merge per-shard results in shard order get
// thread-count independent output as long as the merge is order-insensitive
// (integer counts) or the shard count is fixed.
template <class Fn>
void parallel_for_shards(std::size_t n, unsigned shards, Fn &&fn) {
  shards = std::max(1u, shards);
  if (shards == 1 || n < 2) {
    fn(0u, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(shards);
  {
    std::vector<std::jthread> workers;
    workers.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) {
      std::size_t begin = n * s / shards;
      std::size_t end = n * (s + 1) / shards;
      workers.emplace_back([&, s, begin, end] {
        try {
          fn(s, begin, end);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Runs fn(i) for every i in [0, n) across `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn &&fn) {
  parallel_for_shards(n, std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)),
                      [&](unsigned, std::size_t begin, std::size_t end) {
                        for (std::size_t i = begin; i < end; ++i) fn(i);
                      });
}

}  // namespace phrasekit

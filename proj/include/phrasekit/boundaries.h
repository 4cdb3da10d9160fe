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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace phrasekit {

// Segment boundaries of one sentence, 0-based: b.front() == 0,
// b.back() == sentence length, strictly increasing. Segment i covers tokens
// [b[i], b[i+1]).
struct BoundarySequence {
  std::vector<std::uint32_t> b;

  std::size_t segment_count() const { return b.empty() ? 0 : b.size() - 1; }
  std::size_t segment_begin(std::size_t i) const { return b[i]; }
  std::size_t segment_end(std::size_t i) const { return b[i + 1]; }
  bool valid_for(std::size_t n) const {
    if (b.size() < 2 || b.front() != 0 || b.back() != n) return false;
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i] <= b[i - 1]) return false;
    }
    return true;
  }

  bool operator==(const BoundarySequence &) const = default;
};

// One boundary sequence per corpus sentence, in corpus order.
using CorpusSegmentation = std::vector<BoundarySequence>;

}  // namespace phrasekit

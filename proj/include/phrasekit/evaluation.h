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

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "phrasekit/pipeline.h"

namespace phrasekit {

// Labeled phrases, keyed by normalized text.
struct EvalPool {
  std::unordered_map<std::string, bool> labeled;

  std::size_t positives() const;
  // Throws DataError on a duplicate phrase.
  void add(std::string_view phrase, bool quality);
};

// `label<TAB>phrase` with label 1 (quality) or 0 (inferior).
EvalPool read_pool(std::istream &in, const std::string &name = "<pool>");
EvalPool load_pool(const std::string &path);

struct PrCurve {
  std::vector<std::pair<double, double>> points;  // (recall, precision)
  double auc = 0.0;
};

// Walks the ranking restricted to pool members and records a point each time
// a quality phrase appears. The area is trapezoidal, with the curve extended
// left to recall 0 at the first point's precision. Throws DataError when the
// pool has no positive or no positive appears in the ranking.
PrCurve pr_curve(const RankedPhraseList &ranked, const EvalPool &pool);

// Fraction of pool positives ranked with quality >= threshold.
double recall_at(const RankedPhraseList &ranked, const EvalPool &pool, double threshold);

// `recall<TAB>precision` rows, then `AUC=<value>`.
void write_curve(std::ostream &out, const PrCurve &curve);

}  // namespace phrasekit

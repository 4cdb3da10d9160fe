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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "phrasekit/candidates.h"
#include "phrasekit/corpus.h"
#include "phrasekit/quality.h"
#include "phrasekit/segmenter.h"

namespace phrasekit {

inline constexpr std::string_view kModelHeader = "PHRASEKIT-QM v1";

// Segmenter parameters keyed by strings instead of corpus-local ids, so they
// can be applied to a different corpus.
struct StoredSegmenter {
  std::size_t max_len = 6;
  std::vector<std::string> tags;
  Eigen::MatrixXd delta;
  struct Phrase {
    std::string text;  // normalized, space separated
    double theta = 0.0;
    double quality = 0.0;

    bool operator==(const Phrase &) const = default;
  };
  std::vector<Phrase> phrases;

  bool operator==(const StoredSegmenter &) const = default;
};

// Contents of a model file. Every section is optional.
struct ModelFile {
  std::optional<QualityModel> multiword;
  std::optional<QualityModel> unigram;
  std::optional<StoredSegmenter> segmenter;
};

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view s);

void write_model(std::ostream &out, const ModelFile &model);
ModelFile read_model(std::istream &in, const std::string &name = "<model>");
void save_model(const std::string &path, const ModelFile &model);
ModelFile load_model(const std::string &path);

StoredSegmenter store_segmenter(const TaggedCorpus &corpus,
                                const std::vector<PhraseCandidate> &candidates,
                                const SegmenterParams &params);

// Stored parameters bound to `corpus`: the phrases whose words all occur in
// the corpus become candidates (in file order, raw_freq left at 0) and tags
// missing from the stored table get the default delta.
struct BoundSegmenter {
  std::vector<PhraseCandidate> candidates;
  CandidateTrie trie;
  SegmenterParams params;
};

BoundSegmenter bind_segmenter(const StoredSegmenter &stored, const TaggedCorpus &corpus);

bool models_equal(const QualityModel &a, const QualityModel &b);

}  // namespace phrasekit

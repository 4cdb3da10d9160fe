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

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "phrasekit/boundaries.h"
#include "phrasekit/candidates.h"
#include "phrasekit/corpus.h"

namespace phrasekit {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::array<std::string_view, 8> kFeatureNames = {
    "pmi_min", "pkl", "idf_phrase", "idf_avg_token",
    "stop_first", "stop_last", "freq_norm", "independence"};

inline constexpr std::size_t kBaseFeatureCount = 7;

struct FeatureVector {
  double pmi_min = 0.0;
  double pkl = 0.0;
  double idf_phrase = 0.0;
  double idf_avg_token = 0.0;
  double stop_first = 0.0;
  double stop_last = 0.0;
  double freq_norm = 0.0;
  std::optional<double> independence;  // single-word mode only

  Eigen::RowVectorXd as_row() const;
};

enum class FrequencyMode { kRaw, kRectified };

// Candidate counts plus the per-length totals used as probability
// denominators: n-gram windows (raw) or segments (rectified).
struct FrequencySource {
  FrequencyMode mode = FrequencyMode::kRaw;
  std::vector<std::uint64_t> counts;        // by candidate id
  std::vector<std::uint64_t> total_by_len;  // index = length
  std::vector<std::uint64_t> candidates_by_len;

  // Additive smoothing applied to rectified estimates.
  static constexpr double kEpsilon = 0.5;

  // Occurrence probability of an n-gram of the given length with `count`
  // occurrences under this source.
  double probability(std::uint64_t count, std::size_t length) const;
};

FrequencySource raw_frequency_source(const TaggedCorpus &corpus,
                                     const std::vector<PhraseCandidate> &candidates);

// Rectified counts: how often each candidate is exactly one segment.
FrequencySource rebuild_frequency_source(const TaggedCorpus &corpus,
                                         const std::vector<PhraseCandidate> &candidates,
                                         const CandidateTrie &trie,
                                         const CorpusSegmentation &segmentation);

// Document frequencies used by the informativeness features.
struct CorpusStats {
  std::size_t n_docs = 0;
  std::vector<std::uint64_t> word_df;       // by word id
  std::vector<std::uint64_t> candidate_df;  // by candidate id
};

CorpusStats compute_corpus_stats(const TaggedCorpus &corpus,
                                 const std::vector<PhraseCandidate> &candidates,
                                 const CandidateTrie &trie);

using StopwordSet = std::unordered_set<std::string>;

// One word per line; blank lines and lines starting with '#' are ignored.
StopwordSet load_stopwords(const std::string &path);
// Built-in English list.
const StopwordSet &default_stopwords();

struct FeatureContext {
  const TaggedCorpus &corpus;
  const std::vector<PhraseCandidate> &candidates;
  const CandidateTrie &trie;
  const FrequencySource &source;
  const CorpusStats &stats;
  std::vector<bool> is_stopword;  // by word id
  bool single_word = false;       // adds the independence feature

  FeatureContext(const TaggedCorpus &corpus, const std::vector<PhraseCandidate> &candidates,
                 const CandidateTrie &trie, const FrequencySource &source,
                 const CorpusStats &stats, const StopwordSet &stopwords,
                 bool single_word = false);
};

FeatureVector compute_features(CandidateId id, const FeatureContext &ctx);

// Feature rows for `ids`, in order. Columns: the 7 base features, plus
// independence when ctx.single_word is set.
FeatureMatrix compute_feature_matrix(std::span<const CandidateId> ids, const FeatureContext &ctx,
                                     unsigned threads = 1);

// Debug dump `phrase<TAB>f1<TAB>...<TAB>fk`.
void write_features(std::ostream &out, const TaggedCorpus &corpus,
                    const std::vector<PhraseCandidate> &candidates,
                    std::span<const CandidateId> ids, const FeatureMatrix &features);

}  // namespace phrasekit

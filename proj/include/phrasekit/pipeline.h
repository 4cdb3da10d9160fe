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
#include <vector>

#include "phrasekit/candidates.h"
#include "phrasekit/corpus.h"
#include "phrasekit/features.h"
#include "phrasekit/quality.h"
#include "phrasekit/segmenter.h"

namespace phrasekit {

enum class PipelineMode {
  kAutoPhrase,      // POS-guided segmentation
  kAutoSegPhrase,   // tags ignored: one shared delta, i.e. a length penalty
  kAutoPhrasePlus,  // kAutoPhrase plus ranked single-word phrases
};

std::string_view mode_name(PipelineMode mode);
std::optional<PipelineMode> parse_mode(std::string_view name);

struct PipelineConfig {
  MinerConfig miner;
  EnsembleConfig ensemble;
  ViterbiConfig viterbi;
  PipelineMode mode = PipelineMode::kAutoPhrase;
  CorpusFormat format = CorpusFormat::kTagged;
  std::string kb_path;
  std::string stopword_path;  // empty = built-in English list
  unsigned threads = 0;       // 0 = all cores

  // Copies `threads` into the stage configs.
  void propagate_threads();
};

struct RankedEntry {
  std::string phrase;
  double quality = 0.0;
  std::size_t length = 0;

  bool operator==(const RankedEntry &) const = default;
};

// Sorted by quality descending, ties by phrase text ascending.
struct RankedPhraseList {
  std::vector<RankedEntry> entries;

  void sort();
  std::size_t size() const { return entries.size(); }
};

void write_ranking(std::ostream &out, const RankedPhraseList &ranking);
RankedPhraseList read_ranking(std::istream &in, const std::string &name = "<ranking>");

// Everything a run produces. The working corpus is stored because
// kAutoSegPhrase strips tags before mining.
struct PipelineResult {
  TaggedCorpus corpus;
  MinedCandidates mined;
  CorpusStats stats;
  std::vector<CandidateId> multiword_ids;
  std::optional<LabelPools> pools;
  FeatureMatrix pass1_features;
  FeatureMatrix pass2_features;
  std::optional<QualityModel> pass1_model;
  std::optional<QualityModel> pass2_model;
  std::optional<QualityModel> unigram_model;
  ViterbiResult viterbi;
  CorpusSegmentation segmentation;
  RankedPhraseList pass1_ranking;
  RankedPhraseList ranking;
};

// Mining, pass-1 training on raw-frequency features, Viterbi-trained
// segmentation, rectification, pass-2 training on rectified features and the
// final ranking. Returns an empty ranking when no multi-word n-gram reaches
// the support threshold.
PipelineResult run_pipeline(TaggedCorpus corpus, const KnowledgeBase &kb,
                            const StopwordSet &stopwords, PipelineConfig cfg);

// Loads inputs from the paths in cfg and runs the pipeline.
PipelineResult run_pipeline(const std::string &corpus_path, PipelineConfig cfg);
RankedPhraseList run(const std::string &corpus_path, const std::string &kb_path,
                     PipelineConfig cfg);

// Feature columns used by the single-word model: popularity, informativeness
// and independence.
inline constexpr std::array<Eigen::Index, 4> kUnigramFeatureColumns = {6, 2, 4, 7};

// Trains the single-word model on unigram candidates (whose rectified_freq
// must already be set) and merges its scores into `multiword`. Returns the
// multi-word ranking unchanged, with a warning, when the knowledge base holds
// no single-word candidate.
RankedPhraseList extend_single_word(const TaggedCorpus &corpus,
                                    const std::vector<PhraseCandidate> &candidates,
                                    const CandidateTrie &trie, const CorpusStats &stats,
                                    const StopwordSet &stopwords, const KnowledgeBase &kb,
                                    const RankedPhraseList &multiword, const EnsembleConfig &cfg,
                                    std::optional<QualityModel> *model_out = nullptr);

}  // namespace phrasekit

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

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "phrasekit/candidates.h"
#include "phrasekit/decision_tree.h"
#include "phrasekit/features.h"

namespace phrasekit {

// Normalized knowledge-base phrases: words lowercased, joined by one space.
using KnowledgeBase = std::unordered_set<std::string>;

// One phrase per line, whitespace separated tokens.
KnowledgeBase load_knowledge_base(const std::string &path);
std::string normalize_phrase(std::string_view phrase);

enum class PoolScope { kMultiWord, kSingleWord };

// Candidate ids, ascending. positive = candidates found in the knowledge base,
// negative = every other candidate in scope.
struct LabelPools {
  std::vector<CandidateId> positive;
  std::vector<CandidateId> negative;
};

// Throws DataError when no candidate in scope matches the knowledge base.
LabelPools build_pools(const TaggedCorpus &corpus, const std::vector<PhraseCandidate> &candidates,
                       const KnowledgeBase &kb, PoolScope scope = PoolScope::kMultiWord);

struct EnsembleConfig {
  std::size_t trees = 100;
  std::size_t k_samples = 100;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

// K rows drawn with replacement from each pool for one base classifier.
struct PerturbedTrainingSet {
  std::vector<CandidateId> pos_sample;
  std::vector<CandidateId> neg_sample;
};

// Sample for tree `tree_index`. The random stream depends only on
// (seed, tree_index).
PerturbedTrainingSet draw_training_set(const LabelPools &pools, std::size_t k,
                                       std::uint64_t seed, std::size_t tree_index);

class QualityModel {
 public:
  QualityModel() = default;
  QualityModel(std::vector<DecisionTree> trees, std::size_t k_samples, std::uint64_t seed,
               std::vector<std::string> feature_names);

  template <class Row>
  std::size_t positive_votes(const Row &x) const {
    std::size_t votes = 0;
    for (const auto &t : trees_) votes += t.predict(x) ? 1 : 0;
    return votes;
  }

  // Fraction of trees voting positive.
  template <class Row>
  double score(const Row &x) const {
    if (trees_.empty()) return 0.0;
    return double(positive_votes(x)) / double(trees_.size());
  }

  const std::vector<DecisionTree> &trees() const { return trees_; }
  std::size_t tree_count() const { return trees_.size(); }
  std::size_t k_samples() const { return k_samples_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::string> &feature_names() const { return feature_names_; }

 private:
  std::vector<DecisionTree> trees_;
  std::size_t k_samples_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::string> feature_names_;
};

// Trains cfg.trees unpruned trees, each on its own perturbed training set.
// `features` rows are indexed by candidate id. Deterministic for a given seed,
// whatever cfg.threads is.
QualityModel train(const LabelPools &pools, const FeatureMatrix &features,
                   const EnsembleConfig &cfg, std::vector<std::string> feature_names = {});

// Scores the given candidate rows.
std::vector<double> score_all(const QualityModel &model, const FeatureMatrix &features,
                              std::span<const CandidateId> ids, unsigned threads = 1);

// Probability that more than half of T independent classifiers, each wrong
// with probability p, are wrong.
double ensemble_error(double p, std::size_t trees);

}  // namespace phrasekit

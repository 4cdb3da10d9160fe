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

#include "phrasekit/quality.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "phrasekit/parallel.h"

namespace phrasekit {

std::string normalize_phrase(std::string_view phrase) {
  std::istringstream in{std::string(phrase)};
  std::string word, out;
  while (in >> word) {
    if (!out.empty()) out += ' ';
    out += normalize_word(word);
  }
  return out;
}

KnowledgeBase load_knowledge_base(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open knowledge base file: " + path);
  KnowledgeBase kb;
  std::string line;
  while (std::getline(in, line)) {
    std::string p = normalize_phrase(line);
    if (!p.empty()) kb.insert(std::move(p));
  }
  return kb;
}

LabelPools build_pools(const TaggedCorpus &corpus, const std::vector<PhraseCandidate> &candidates,
                       const KnowledgeBase &kb, PoolScope scope) {
  LabelPools pools;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const bool single = candidates[i].length() == 1;
    if (single != (scope == PoolScope::kSingleWord)) continue;
    auto id = static_cast<CandidateId>(i);
    if (kb.contains(corpus.phrase_text(candidates[i].words))) {
      pools.positive.push_back(id);
    } else {
      pools.negative.push_back(id);
    }
  }
  if (pools.positive.empty()) {
    throw DataError(scope == PoolScope::kMultiWord
                        ? "positive pool is empty: no multi-word candidate is in the knowledge base"
                        : "positive pool is empty: no single-word candidate is in the knowledge base");
  }
  return pools;
}

PerturbedTrainingSet draw_training_set(const LabelPools &pools, std::size_t k,
                                       std::uint64_t seed, std::size_t tree_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tree_index),
                    static_cast<std::uint32_t>(std::uint64_t(tree_index) >> 32)};
  std::mt19937_64 rng(seq);
  PerturbedTrainingSet set;
  set.pos_sample.reserve(k);
  set.neg_sample.reserve(k);
  std::uniform_int_distribution<std::size_t> pick_pos(0, pools.positive.size() - 1);
  for (std::size_t i = 0; i < k; ++i) set.pos_sample.push_back(pools.positive[pick_pos(rng)]);
  if (!pools.negative.empty()) {
    std::uniform_int_distribution<std::size_t> pick_neg(0, pools.negative.size() - 1);
    for (std::size_t i = 0; i < k; ++i) set.neg_sample.push_back(pools.negative[pick_neg(rng)]);
  }
  return set;
}

QualityModel::QualityModel(std::vector<DecisionTree> trees, std::size_t k_samples,
                           std::uint64_t seed, std::vector<std::string> feature_names)
    : trees_(std::move(trees)),
      k_samples_(k_samples),
      seed_(seed),
      feature_names_(std::move(feature_names)) {}

QualityModel train(const LabelPools &pools, const FeatureMatrix &features,
                   const EnsembleConfig &cfg, std::vector<std::string> feature_names) {
  if (cfg.trees < 1) throw DataError("tree count must be >= 1");
  if (cfg.k_samples < 1) throw DataError("sample count K must be >= 1");
  if (pools.positive.empty() || pools.negative.empty()) {
    throw DataError("training needs non-empty positive and negative pools");
  }
  if (feature_names.empty()) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      feature_names.emplace_back(kFeatureNames[static_cast<std::size_t>(c)]);
    }
  }

  std::vector<DecisionTree> trees(cfg.trees);
  parallel_for(cfg.trees, resolve_threads(cfg.threads), [&](std::size_t t) {
    PerturbedTrainingSet set = draw_training_set(pools, cfg.k_samples, cfg.seed, t);
    std::vector<std::size_t> rows;
    std::vector<std::uint8_t> labels;
    rows.reserve(2 * cfg.k_samples);
    labels.reserve(2 * cfg.k_samples);
    for (CandidateId id : set.pos_sample) {
      rows.push_back(id);
      labels.push_back(1);
    }
    for (CandidateId id : set.neg_sample) {
      rows.push_back(id);
      labels.push_back(0);
    }
    trees[t] = DecisionTree::fit(features, rows, labels);
  });

  std::size_t stumps = 0;
  for (const auto &t : trees) stumps += t.nodes().size() == 1 ? 1 : 0;
  if (stumps == trees.size()) {
    log(LogLevel::kWarning,
        "all trees are single leaves: features do not separate the sampled pools");
  }
  return QualityModel(std::move(trees), cfg.k_samples, cfg.seed, std::move(feature_names));
}

std::vector<double> score_all(const QualityModel &model, const FeatureMatrix &features,
                              std::span<const CandidateId> ids, unsigned threads) {
  std::vector<double> out(ids.size());
  parallel_for(ids.size(), resolve_threads(threads), [&](std::size_t i) {
    out[i] = model.score(features.row(ids[i]));
  });
  return out;
}

double ensemble_error(double p, std::size_t trees) {
  if (trees == 0) throw std::invalid_argument("ensemble_error: T must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ensemble_error: p must be in [0,1]");
  const std::size_t first = 1 + trees / 2;  // floor(1 + T/2)
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double sum = 0.0;
  if (trees <= 1000) {
    // C(T, t) stays below 1e300 for T <= 1000, so direct products are exact
    // enough and reproduce small cases to the last bit.
    double choose = 1.0;
    for (std::size_t t = 1; t <= first; ++t) choose = choose * double(trees - t + 1) / double(t);
    for (std::size_t t = first; t <= trees; ++t) {
      sum += choose * std::pow(p, double(t)) * std::pow(1.0 - p, double(trees - t));
      choose = choose * double(trees - t) / double(t + 1);
    }
    return std::min(1.0, sum);
  }
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double n = double(trees);
  for (std::size_t t = first; t <= trees; ++t) {
    const double k = double(t);
    sum += std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) +
                    k * log_p + (n - k) * log_q);
  }
  return std::min(1.0, sum);
}

}  // namespace phrasekit

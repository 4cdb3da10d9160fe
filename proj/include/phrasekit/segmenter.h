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
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "phrasekit/boundaries.h"
#include "phrasekit/candidates.h"
#include "phrasekit/corpus.h"

namespace phrasekit {

// delta(a, b): probability that tag a directly followed by tag b sits inside
// one phrase. Pairs never observed keep kDefault.
class PosTransitionTable {
 public:
  static constexpr double kDefault = 0.5;
  // Lookups used for scoring are clamped to [kClamp, 1 - kClamp] so that no
  // segmentation gets probability exactly zero from the POS term.
  static constexpr double kClamp = 1e-8;

  PosTransitionTable() = default;
  explicit PosTransitionTable(std::size_t n_tags, double value = kDefault)
      : delta_(Eigen::MatrixXd::Constant(Eigen::Index(n_tags), Eigen::Index(n_tags), value)) {}

  std::size_t tag_count() const { return std::size_t(delta_.rows()); }
  double operator()(TagId a, TagId b) const { return delta_(a, b); }
  double &operator()(TagId a, TagId b) { return delta_(a, b); }
  double effective(TagId a, TagId b) const;

  const Eigen::MatrixXd &matrix() const { return delta_; }
  Eigen::MatrixXd &matrix() { return delta_; }

 private:
  Eigen::MatrixXd delta_;
};

// theta_u by candidate id; within each length the values of segments that
// occurred sum to one.
struct SegmentMultinomial {
  std::vector<double> theta;
};

// Two segmentation scores closer than this (relative to their magnitude) are a
// tie, and the DP keeps the earlier predecessor. Log-space sums of the same
// factors in different orders differ in the last bits.
inline constexpr double kTieTolerance = 1e-12;

// True if `score` beats `current` by more than the tie tolerance.
inline bool improves(double score, double current) {
  if (current == -std::numeric_limits<double>::infinity()) return score > current;
  return score > current + kTieTolerance * std::max(1.0, std::abs(current));
}

struct SegmenterParams {
  // Floor applied to theta at lookup time; stored values stay exact.
  static constexpr double kThetaFloor = 1e-8;

  PosTransitionTable delta;
  SegmentMultinomial theta;
  std::vector<double> quality;  // by candidate id
  std::size_t max_len = 6;
};

// POS quality of tokens [l, r) of a sentence with tags `tags`:
// (1 - delta(t[r-1], t[r])) * prod_{j=l+1}^{r-1} delta(t[j-1], t[j]), where the
// first factor is 1 when the segment ends the sentence. Uses stored delta
// values without clamping.
double pos_quality(const PosTransitionTable &delta, std::span<const TagId> tags, std::size_t l,
                   std::size_t r);

struct SentenceSegmentation {
  BoundarySequence boundaries;
  double log_likelihood = 0.0;
};

// Best segmentation of one sentence under `params`: maximizes the sum over
// segments of log T + log theta + log Q. Candidates come from `trie`; a token
// that does not start any candidate of length one is still a singleton segment
// with floor theta and quality 1. On exact score ties the first predecessor
// found (smallest start) is kept.
SentenceSegmentation segment_sentence(std::span<const WordId> words, std::span<const TagId> tags,
                                      const SegmenterParams &params, const CandidateTrie &trie);
SentenceSegmentation segment_sentence(const Sentence &sentence, const SegmenterParams &params,
                                      const CandidateTrie &trie);

// Log score of one segment [l, r) as used by segment_sentence, or -inf when
// the segment is not allowed.
double segment_log_score(std::span<const WordId> words, std::span<const TagId> tags,
                         std::size_t l, std::size_t r, const SegmenterParams &params,
                         const CandidateTrie &trie);

// Joint log-likelihood of a fixed segmentation of one sentence.
double sentence_log_likelihood(std::span<const WordId> words, std::span<const TagId> tags,
                               const BoundarySequence &b, const SegmenterParams &params,
                               const CandidateTrie &trie);

struct CorpusSegmentationResult {
  CorpusSegmentation segmentation;
  double log_likelihood = 0.0;
};

CorpusSegmentationResult segment_corpus(const TaggedCorpus &corpus, const SegmenterParams &params,
                                        const CandidateTrie &trie, unsigned threads = 1);

double corpus_log_likelihood(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                             const SegmenterParams &params, const CandidateTrie &trie,
                             unsigned threads = 1);

// Numerators (pairs inside one segment) and denominators (all adjacent pairs
// within sentences) of the delta update.
struct TagPairCounts {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> internal;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> total;
};

TagPairCounts count_tag_pairs(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                              unsigned threads = 1);

PosTransitionTable update_delta(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                                unsigned threads = 1);

// Times each candidate is a whole segment, and the number of candidate
// segments of each length.
struct SegmentCounts {
  std::vector<std::int64_t> by_candidate;
  std::vector<std::int64_t> by_length;
};

SegmentCounts count_segments(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                             const std::vector<PhraseCandidate> &candidates,
                             const CandidateTrie &trie, unsigned threads = 1);

SegmentMultinomial update_theta(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                                const std::vector<PhraseCandidate> &candidates,
                                const CandidateTrie &trie, unsigned threads = 1);

// Raw frequencies normalized within each length.
SegmentMultinomial initial_theta(const std::vector<PhraseCandidate> &candidates);

struct ViterbiConfig {
  std::size_t max_outer = 10;  // theta updates
  std::size_t max_inner = 10;  // delta updates per theta update
  double tol = 1e-4;           // max-abs parameter change
  unsigned threads = 1;
};

struct ViterbiResult {
  SegmenterParams params;
  // Joint log-likelihood after every re-segmentation and after every parameter
  // update, in order. Non-decreasing.
  std::vector<double> log_likelihood_trace;
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations = 0;
};

// Hard-EM training of delta and theta with the quality scores held fixed.
ViterbiResult viterbi_train(const TaggedCorpus &corpus, const std::vector<double> &quality,
                            const std::vector<PhraseCandidate> &candidates,
                            const CandidateTrie &trie, const ViterbiConfig &cfg,
                            std::size_t max_len);

// One sentence per line; multi-token segments are written as
// [tok_tok_tok]; a #DOC line separates documents.
void write_segmentation(std::ostream &out, const TaggedCorpus &corpus,
                        const CorpusSegmentation &segmentation);

}  // namespace phrasekit

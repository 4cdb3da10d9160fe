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

#include "phrasekit/segmenter.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "phrasekit/parallel.h"

namespace phrasekit {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-sentence log delta terms: inside[j] = log delta(t[j-1], t[j]) and
// boundary[j] = log(1 - delta(t[j-1], t[j])) for 1 <= j < n.
struct PairLogs {
  std::vector<double> inside;
  std::vector<double> boundary;

  PairLogs(const PosTransitionTable &delta, std::span<const TagId> tags)
      : inside(tags.size(), 0.0), boundary(tags.size(), 0.0) {
    for (std::size_t j = 1; j < tags.size(); ++j) {
      const double d = delta.effective(tags[j - 1], tags[j]);
      inside[j] = std::log(d);
      boundary[j] = std::log1p(-d);
    }
  }

  double pos_term(std::size_t l, std::size_t r) const {
    double s = 0.0;
    for (std::size_t j = l + 1; j < r; ++j) s += inside[j];
    if (r < inside.size()) s += boundary[r];
    return s;
  }
};

double theta_of(const SegmenterParams &params, CandidateId id) {
  const double t = id < params.theta.theta.size() ? params.theta.theta[id] : 0.0;
  return std::max(t, SegmenterParams::kThetaFloor);
}

double quality_of(const SegmenterParams &params, CandidateId id) {
  return id < params.quality.size() ? params.quality[id] : 1.0;
}

double segment_score(const PairLogs &logs, std::size_t l, std::size_t r, CandidateId id,
                     const SegmenterParams &params) {
  if (id == kNoCandidate) {
    return logs.pos_term(l, r) + std::log(SegmenterParams::kThetaFloor);
  }
  return logs.pos_term(l, r) + std::log(theta_of(params, id)) + std::log(quality_of(params, id));
}

// Candidate id of tokens [l, r), kNoCandidate for an out-of-vocabulary
// singleton, or nullopt when [l, r) cannot be a segment.
std::optional<CandidateId> segment_candidate(std::span<const WordId> words, std::size_t l,
                                             std::size_t r, const SegmenterParams &params,
                                             const CandidateTrie &trie) {
  const std::size_t len = r - l;
  CandidateId id = kNoCandidate;
  if (len <= params.max_len && len <= trie.max_depth()) id = trie.find(words.subspan(l, len));
  if (id == kNoCandidate && len != 1) return std::nullopt;
  return id;
}

}  // namespace

double PosTransitionTable::effective(TagId a, TagId b) const {
  double d = (Eigen::Index(a) < delta_.rows() && Eigen::Index(b) < delta_.cols()) ? delta_(a, b)
                                                                                    : kDefault;
  return std::clamp(d, kClamp, 1.0 - kClamp);
}

double pos_quality(const PosTransitionTable &delta, std::span<const TagId> tags, std::size_t l,
                   std::size_t r) {
  double t = r < tags.size() ? 1.0 - delta(tags[r - 1], tags[r]) : 1.0;
  for (std::size_t j = l + 1; j < r; ++j) t *= delta(tags[j - 1], tags[j]);
  return t;
}

double segment_log_score(std::span<const WordId> words, std::span<const TagId> tags,
                         std::size_t l, std::size_t r, const SegmenterParams &params,
                         const CandidateTrie &trie) {
  if (l >= r || r > words.size()) return kNegInf;
  auto id = segment_candidate(words, l, r, params, trie);
  if (!id) return kNegInf;
  return segment_score(PairLogs(params.delta, tags), l, r, *id, params);
}

SentenceSegmentation segment_sentence(std::span<const WordId> words, std::span<const TagId> tags,
                                      const SegmenterParams &params, const CandidateTrie &trie) {
  const std::size_t n = words.size();
  SentenceSegmentation out;
  if (n == 0) {
    out.boundaries.b = {0};
    return out;
  }
  const PairLogs logs(params.delta, tags);
  std::vector<double> h(n + 1, kNegInf);
  std::vector<std::uint32_t> g(n + 1, 0);
  h[0] = 0.0;

  auto relax = [&](std::size_t i, std::size_t j, CandidateId id) {
    const double score = h[i] + segment_score(logs, i, j, id, params);
    if (improves(score, h[j])) {
      h[j] = score;
      g[j] = static_cast<std::uint32_t>(i);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] == kNegInf) continue;
    bool singleton = false;
    for (const TrieMatch &m : trie_walk(trie, words, i)) {
      if (m.end - i > params.max_len) break;
      relax(i, m.end, m.id);
      singleton |= m.end == i + 1;
    }
    if (!singleton) relax(i, i + 1, kNoCandidate);
  }

  std::vector<std::uint32_t> rev;
  for (std::size_t j = n; j > 0; j = g[j]) rev.push_back(static_cast<std::uint32_t>(j));
  rev.push_back(0);
  out.boundaries.b.assign(rev.rbegin(), rev.rend());
  out.log_likelihood = h[n];
  return out;
}

SentenceSegmentation segment_sentence(const Sentence &sentence, const SegmenterParams &params,
                                      const CandidateTrie &trie) {
  return segment_sentence(sentence.words, sentence.tags, params, trie);
}

double sentence_log_likelihood(std::span<const WordId> words, std::span<const TagId> tags,
                               const BoundarySequence &b, const SegmenterParams &params,
                               const CandidateTrie &trie) {
  if (!b.valid_for(words.size())) return kNegInf;
  const PairLogs logs(params.delta, tags);
  double total = 0.0;
  for (std::size_t i = 0; i < b.segment_count(); ++i) {
    const std::size_t l = b.segment_begin(i), r = b.segment_end(i);
    auto id = segment_candidate(words, l, r, params, trie);
    if (!id) return kNegInf;
    total += segment_score(logs, l, r, *id, params);
  }
  return total;
}

CorpusSegmentationResult segment_corpus(const TaggedCorpus &corpus, const SegmenterParams &params,
                                        const CandidateTrie &trie, unsigned threads) {
  const auto &sentences = corpus.sentences();
  CorpusSegmentationResult out;
  out.segmentation.resize(sentences.size());
  std::vector<double> ll(sentences.size(), 0.0);
  parallel_for(sentences.size(), resolve_threads(threads), [&](std::size_t s) {
    auto r = segment_sentence(sentences[s], params, trie);
    out.segmentation[s] = std::move(r.boundaries);
    ll[s] = r.log_likelihood;
  });
  for (double v : ll) out.log_likelihood += v;
  return out;
}

double corpus_log_likelihood(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                             const SegmenterParams &params, const CandidateTrie &trie,
                             unsigned threads) {
  const auto &sentences = corpus.sentences();
  std::vector<double> ll(sentences.size(), 0.0);
  parallel_for(sentences.size(), resolve_threads(threads), [&](std::size_t s) {
    ll[s] = sentence_log_likelihood(sentences[s].words, sentences[s].tags, segmentation[s],
                                    params, trie);
  });
  double total = 0.0;
  for (double v : ll) total += v;
  return total;
}

TagPairCounts count_tag_pairs(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                              unsigned threads) {
  const auto n_tags = Eigen::Index(corpus.tagset().size());
  const auto &sentences = corpus.sentences();
  const unsigned shards = resolve_threads(threads);
  std::vector<TagPairCounts> partial(shards);
  for (auto &p : partial) {
    p.internal.setZero(n_tags, n_tags);
    p.total.setZero(n_tags, n_tags);
  }
  parallel_for_shards(sentences.size(), shards,
                      [&](unsigned shard, std::size_t begin, std::size_t end) {
    auto &c = partial[shard];
    for (std::size_t s = begin; s < end; ++s) {
      const auto &tags = sentences[s].tags;
      const auto &b = segmentation[s];
      for (std::size_t i = 0; i < b.segment_count(); ++i) {
        for (std::size_t j = b.segment_begin(i) + 1; j < b.segment_end(i); ++j) {
          ++c.internal(tags[j - 1], tags[j]);
        }
      }
      for (std::size_t j = 1; j < tags.size(); ++j) ++c.total(tags[j - 1], tags[j]);
    }
  });
  TagPairCounts out = std::move(partial[0]);
  for (unsigned s = 1; s < shards; ++s) {
    out.internal += partial[s].internal;
    out.total += partial[s].total;
  }
  return out;
}

PosTransitionTable update_delta(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                                unsigned threads) {
  TagPairCounts counts = count_tag_pairs(corpus, segmentation, threads);
  PosTransitionTable delta(corpus.tagset().size());
  for (Eigen::Index a = 0; a < counts.total.rows(); ++a) {
    for (Eigen::Index b = 0; b < counts.total.cols(); ++b) {
      if (counts.total(a, b) > 0) {
        delta.matrix()(a, b) = double(counts.internal(a, b)) / double(counts.total(a, b));
      }
    }
  }
  return delta;
}

SegmentCounts count_segments(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                             const std::vector<PhraseCandidate> &candidates,
                             const CandidateTrie &trie, unsigned threads) {
  const auto &sentences = corpus.sentences();
  const unsigned shards = resolve_threads(threads);
  std::size_t max_len = 0;
  for (const auto &c : candidates) max_len = std::max(max_len, c.length());
  std::vector<SegmentCounts> partial(shards);
  for (auto &p : partial) {
    p.by_candidate.assign(candidates.size(), 0);
    p.by_length.assign(max_len + 1, 0);
  }
  parallel_for_shards(sentences.size(), shards,
                      [&](unsigned shard, std::size_t begin, std::size_t end) {
    auto &c = partial[shard];
    for (std::size_t s = begin; s < end; ++s) {
      std::span<const WordId> words(sentences[s].words);
      const auto &b = segmentation[s];
      for (std::size_t i = 0; i < b.segment_count(); ++i) {
        const std::size_t l = b.segment_begin(i), len = b.segment_end(i) - l;
        if (len > max_len) continue;
        CandidateId id = trie.find(words.subspan(l, len));
        if (id == kNoCandidate) continue;
        ++c.by_candidate[id];
        ++c.by_length[len];
      }
    }
  });
  SegmentCounts out = std::move(partial[0]);
  for (unsigned s = 1; s < shards; ++s) {
    for (std::size_t i = 0; i < out.by_candidate.size(); ++i) {
      out.by_candidate[i] += partial[s].by_candidate[i];
    }
    for (std::size_t i = 0; i < out.by_length.size(); ++i) out.by_length[i] += partial[s].by_length[i];
  }
  return out;
}

SegmentMultinomial update_theta(const TaggedCorpus &corpus, const CorpusSegmentation &segmentation,
                                const std::vector<PhraseCandidate> &candidates,
                                const CandidateTrie &trie, unsigned threads) {
  SegmentCounts counts = count_segments(corpus, segmentation, candidates, trie, threads);
  SegmentMultinomial out;
  out.theta.assign(candidates.size(), 0.0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto denom = counts.by_length[candidates[i].length()];
    if (denom > 0) out.theta[i] = double(counts.by_candidate[i]) / double(denom);
  }
  return out;
}

SegmentMultinomial initial_theta(const std::vector<PhraseCandidate> &candidates) {
  std::vector<double> by_length;
  for (const auto &c : candidates) {
    if (c.length() >= by_length.size()) by_length.resize(c.length() + 1, 0.0);
    by_length[c.length()] += double(c.raw_freq);
  }
  SegmentMultinomial out;
  out.theta.reserve(candidates.size());
  for (const auto &c : candidates) {
    const double denom = by_length[c.length()];
    out.theta.push_back(denom > 0 ? double(c.raw_freq) / denom : 0.0);
  }
  return out;
}

namespace {

double max_abs_change(const std::vector<double> &a, const std::vector<double> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void require_finite(double ll) {
  if (!std::isfinite(ll)) {
    throw DataError("segmentation log-likelihood is not finite; check quality scores and smoothing");
  }
}

}  // namespace

ViterbiResult viterbi_train(const TaggedCorpus &corpus, const std::vector<double> &quality,
                            const std::vector<PhraseCandidate> &candidates,
                            const CandidateTrie &trie, const ViterbiConfig &cfg,
                            std::size_t max_len) {
  ViterbiResult out;
  SegmenterParams &params = out.params;
  params.delta = PosTransitionTable(corpus.tagset().size());
  params.theta = initial_theta(candidates);
  params.quality = quality;
  params.max_len = max_len;

  auto resegment = [&] {
    CorpusSegmentationResult seg = segment_corpus(corpus, params, trie, cfg.threads);
    require_finite(seg.log_likelihood);
    out.log_likelihood_trace.push_back(seg.log_likelihood);
    return seg;
  };
  auto record = [&](const CorpusSegmentation &seg) {
    out.log_likelihood_trace.push_back(
        corpus_log_likelihood(corpus, seg, params, trie, cfg.threads));
  };

  for (std::size_t outer = 0; outer < cfg.max_outer; ++outer) {
    ++out.outer_iterations;
    for (std::size_t inner = 0; inner < cfg.max_inner; ++inner) {
      ++out.inner_iterations;
      CorpusSegmentationResult seg = resegment();
      PosTransitionTable next = update_delta(corpus, seg.segmentation, cfg.threads);
      const double change = (next.matrix() - params.delta.matrix()).cwiseAbs().maxCoeff();
      params.delta = std::move(next);
      record(seg.segmentation);
      if (change < cfg.tol) break;
    }
    CorpusSegmentationResult seg = resegment();
    SegmentMultinomial next = update_theta(corpus, seg.segmentation, candidates, trie, cfg.threads);
    const double change = max_abs_change(next.theta, params.theta.theta);
    params.theta = std::move(next);
    record(seg.segmentation);
    if (change < cfg.tol) break;
  }
  return out;
}

void write_segmentation(std::ostream &out, const TaggedCorpus &corpus,
                        const CorpusSegmentation &segmentation) {
  const auto &sentences = corpus.sentences();
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (s > 0 && sentences[s].doc != sentences[s - 1].doc) out << kDocMarker << '\n';
    const auto &b = segmentation[s];
    for (std::size_t i = 0; i < b.segment_count(); ++i) {
      if (i > 0) out << ' ';
      const std::size_t l = b.segment_begin(i), r = b.segment_end(i);
      if (r - l == 1) {
        out << sentences[s].surface[l];
        continue;
      }
      out << '[';
      for (std::size_t k = l; k < r; ++k) {
        if (k > l) out << '_';
        out << sentences[s].surface[k];
      }
      out << ']';
    }
    out << '\n';
  }
}

}  // namespace phrasekit

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

#include "phrasekit/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "phrasekit/parallel.h"

namespace phrasekit {

Eigen::RowVectorXd FeatureVector::as_row() const {
  Eigen::RowVectorXd row(independence ? 8 : 7);
  row << pmi_min, pkl, idf_phrase, idf_avg_token, stop_first, stop_last, freq_norm;
  if (independence) row(7) = *independence;
  return row;
}

double FrequencySource::probability(std::uint64_t count, std::size_t length) const {
  const double total = length < total_by_len.size() ? double(total_by_len[length]) : 0.0;
  const double n_len =
      length < candidates_by_len.size() ? double(candidates_by_len[length]) : 0.0;
  if (mode == FrequencyMode::kRaw && count > 0 && total > 0) {
    return double(count) / total;
  }
  const double denom = total + std::max(n_len, 1.0) * kEpsilon;
  return (double(count) + kEpsilon) / denom;
}

namespace {

std::vector<std::uint64_t> candidates_per_length(const std::vector<PhraseCandidate> &cands) {
  std::vector<std::uint64_t> out;
  for (const auto &c : cands) {
    if (c.length() >= out.size()) out.resize(c.length() + 1, 0);
    ++out[c.length()];
  }
  return out;
}

}  // namespace

FrequencySource raw_frequency_source(const TaggedCorpus &corpus,
                                     const std::vector<PhraseCandidate> &candidates) {
  FrequencySource src;
  src.mode = FrequencyMode::kRaw;
  src.counts.reserve(candidates.size());
  std::size_t max_len = 0;
  for (const auto &c : candidates) {
    src.counts.push_back(c.raw_freq);
    max_len = std::max(max_len, c.length());
  }
  src.total_by_len.assign(max_len + 1, 0);
  for (const auto &s : corpus.sentences()) {
    for (std::size_t len = 1; len <= max_len && len <= s.size(); ++len) {
      src.total_by_len[len] += s.size() - len + 1;
    }
  }
  src.candidates_by_len = candidates_per_length(candidates);
  return src;
}

FrequencySource rebuild_frequency_source(const TaggedCorpus &corpus,
                                         const std::vector<PhraseCandidate> &candidates,
                                         const CandidateTrie &trie,
                                         const CorpusSegmentation &segmentation) {
  const auto &sentences = corpus.sentences();
  if (segmentation.size() != sentences.size()) {
    throw DataError("segmentation does not cover the corpus");
  }
  FrequencySource src;
  src.mode = FrequencyMode::kRectified;
  src.counts.assign(candidates.size(), 0);
  src.total_by_len.assign(trie.max_depth() + 1, 0);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    std::span<const WordId> words(sentences[s].words);
    const auto &seg = segmentation[s];
    for (std::size_t i = 0; i < seg.segment_count(); ++i) {
      const std::size_t begin = seg.segment_begin(i);
      const std::size_t len = seg.segment_end(i) - begin;
      if (len >= src.total_by_len.size()) src.total_by_len.resize(len + 1, 0);
      ++src.total_by_len[len];
      if (len > trie.max_depth()) continue;
      CandidateId id = trie.find(words.subspan(begin, len));
      if (id != kNoCandidate) ++src.counts[id];
    }
  }
  src.candidates_by_len = candidates_per_length(candidates);
  return src;
}

CorpusStats compute_corpus_stats(const TaggedCorpus &corpus,
                                 const std::vector<PhraseCandidate> &candidates,
                                 const CandidateTrie &trie) {
  CorpusStats stats;
  stats.n_docs = corpus.n_docs();
  stats.word_df.assign(corpus.vocabulary().size(), 0);
  stats.candidate_df.assign(candidates.size(), 0);

  const auto &sentences = corpus.sentences();
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sentences[a].doc < sentences[b].doc;
  });

  constexpr DocId kUnseen = std::numeric_limits<DocId>::max();
  std::vector<DocId> word_seen(stats.word_df.size(), kUnseen);
  std::vector<DocId> cand_seen(candidates.size(), kUnseen);
  for (std::size_t s : order) {
    const Sentence &sent = sentences[s];
    std::span<const WordId> words(sent.words);
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (word_seen[words[i]] != sent.doc) {
        word_seen[words[i]] = sent.doc;
        ++stats.word_df[words[i]];
      }
      for (const TrieMatch &m : trie_walk(trie, words, i)) {
        if (cand_seen[m.id] != sent.doc) {
          cand_seen[m.id] = sent.doc;
          ++stats.candidate_df[m.id];
        }
      }
    }
  }
  return stats;
}

FeatureContext::FeatureContext(const TaggedCorpus &corpus_,
                               const std::vector<PhraseCandidate> &candidates_,
                               const CandidateTrie &trie_, const FrequencySource &source_,
                               const CorpusStats &stats_, const StopwordSet &stopwords,
                               bool single_word_)
    : corpus(corpus_),
      candidates(candidates_),
      trie(trie_),
      source(source_),
      stats(stats_),
      is_stopword(corpus_.vocabulary().size(), false),
      single_word(single_word_) {
  const auto &names = corpus.vocabulary().names();
  for (std::size_t w = 0; w < names.size(); ++w) {
    is_stopword[w] = stopwords.contains(names[w]);
  }
}

namespace {

double idf(std::size_t n_docs, std::uint64_t df) {
  if (n_docs == 0) return 0.0;
  return std::log(double(n_docs) / double(std::max<std::uint64_t>(df, 1)));
}

}  // namespace

FeatureVector compute_features(CandidateId id, const FeatureContext &ctx) {
  const PhraseCandidate &cand = ctx.candidates[id];
  const auto &src = ctx.source;
  const std::uint64_t count = src.counts[id];
  if (src.mode == FrequencyMode::kRaw && count == 0) {
    throw std::logic_error("raw-frequency features requested for an unseen candidate");
  }
  std::span<const WordId> words(cand.words);
  const std::size_t len = words.size();

  auto count_of = [&](std::span<const WordId> part) -> std::uint64_t {
    CandidateId pid = ctx.trie.find(part);
    return pid == kNoCandidate ? 0 : src.counts[pid];
  };

  FeatureVector fv;
  const double p = src.probability(count, len);
  fv.freq_norm = p;
  if (len >= 2) {
    const double log_p = std::log(p);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < len; ++k) {
      auto left = words.first(k);
      auto right = words.subspan(k);
      double pmi = log_p - std::log(src.probability(count_of(left), left.size())) -
                   std::log(src.probability(count_of(right), right.size()));
      best = std::min(best, pmi);
    }
    fv.pmi_min = best;
    fv.pkl = p * best;
  }
  fv.idf_phrase = idf(ctx.stats.n_docs, ctx.stats.candidate_df[id]);
  double token_idf = 0.0;
  for (WordId w : words) token_idf += idf(ctx.stats.n_docs, ctx.stats.word_df[w]);
  fv.idf_avg_token = token_idf / double(len);
  fv.stop_first = ctx.is_stopword[words.front()] ? 1.0 : 0.0;
  fv.stop_last = ctx.is_stopword[words.back()] ? 1.0 : 0.0;
  if (ctx.single_word) {
    fv.independence = cand.raw_freq == 0
                          ? 0.0
                          : std::min(1.0, double(cand.rectified_freq) / double(cand.raw_freq));
  }
  return fv;
}

FeatureMatrix compute_feature_matrix(std::span<const CandidateId> ids, const FeatureContext &ctx,
                                     unsigned threads) {
  FeatureMatrix m(static_cast<Eigen::Index>(ids.size()),
                  ctx.single_word ? 8 : static_cast<Eigen::Index>(kBaseFeatureCount));
  parallel_for(ids.size(), resolve_threads(threads), [&](std::size_t i) {
    m.row(static_cast<Eigen::Index>(i)) = compute_features(ids[i], ctx).as_row();
  });
  return m;
}

void write_features(std::ostream &out, const TaggedCorpus &corpus,
                    const std::vector<PhraseCandidate> &candidates,
                    std::span<const CandidateId> ids, const FeatureMatrix &features) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << corpus.phrase_text(candidates[ids[i]].words);
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      out << '\t' << features(static_cast<Eigen::Index>(i), c);
    }
    out << '\n';
  }
}

StopwordSet load_stopwords(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path);
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t");
    out.insert(normalize_word(line.substr(first, last - first + 1)));
  }
  return out;
}

}  // namespace phrasekit

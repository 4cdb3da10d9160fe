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

#include "phrasekit/pipeline.h"

#include <algorithm>
#include <span>
#include <istream>
#include <ostream>

#include "phrasekit/model_io.h"

namespace phrasekit {

std::string_view mode_name(PipelineMode mode) {
  switch (mode) {
    case PipelineMode::kAutoPhrase: return "autophrase";
    case PipelineMode::kAutoSegPhrase: return "autosegphrase";
    case PipelineMode::kAutoPhrasePlus: return "autophrase-plus";
  }
  return "?";
}

std::optional<PipelineMode> parse_mode(std::string_view name) {
  for (auto m : {PipelineMode::kAutoPhrase, PipelineMode::kAutoSegPhrase,
                 PipelineMode::kAutoPhrasePlus}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

void PipelineConfig::propagate_threads() {
  miner.threads = threads;
  ensemble.threads = threads;
  viterbi.threads = threads;
}

void RankedPhraseList::sort() {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry &a, const RankedEntry &b) {
    if (a.quality != b.quality) return a.quality > b.quality;
    return a.phrase < b.phrase;
  });
}

void write_ranking(std::ostream &out, const RankedPhraseList &ranking) {
  for (const auto &e : ranking.entries) out << format_double(e.quality) << '\t' << e.phrase << '\n';
}

RankedPhraseList read_ranking(std::istream &in, const std::string &name) {
  RankedPhraseList out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(name, line_no, "expected quality<TAB>phrase");
    RankedEntry e;
    try {
      e.quality = parse_double(std::string_view(line).substr(0, tab));
    } catch (const DataError &) {
      throw ParseError(name, line_no, "quality is not a number");
    }
    e.phrase = normalize_phrase(line.substr(tab + 1));
    e.length = static_cast<std::size_t>(std::count(e.phrase.begin(), e.phrase.end(), ' ') + 1);
    out.entries.push_back(std::move(e));
  }
  return out;
}

namespace {

RankedPhraseList rank(const TaggedCorpus &corpus, const std::vector<PhraseCandidate> &candidates,
                      std::span<const CandidateId> ids, const std::vector<double> &scores) {
  RankedPhraseList out;
  out.entries.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.entries.push_back(
        {corpus.phrase_text(candidates[ids[i]].words), scores[i], candidates[ids[i]].length()});
  }
  out.sort();
  return out;
}

std::vector<CandidateId> all_ids(std::size_t n) {
  std::vector<CandidateId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<CandidateId>(i);
  return ids;
}

}  // namespace

RankedPhraseList extend_single_word(const TaggedCorpus &corpus,
                                    const std::vector<PhraseCandidate> &candidates,
                                    const CandidateTrie &trie, const CorpusStats &stats,
                                    const StopwordSet &stopwords, const KnowledgeBase &kb,
                                    const RankedPhraseList &multiword, const EnsembleConfig &cfg,
                                    std::optional<QualityModel> *model_out) {
  LabelPools pools;
  try {
    pools = build_pools(corpus, candidates, kb, PoolScope::kSingleWord);
  } catch (const DataError &e) {
    log(LogLevel::kWarning, std::string(e.what()) + "; skipping single-word extension");
    return multiword;
  }
  if (pools.negative.empty()) {
    log(LogLevel::kWarning, "no unlabeled single-word candidates; skipping single-word extension");
    return multiword;
  }

  const FrequencySource raw = raw_frequency_source(corpus, candidates);
  const FeatureContext ctx(corpus, candidates, trie, raw, stats, stopwords, true);
  std::vector<CandidateId> unigram_ids;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].length() == 1) unigram_ids.push_back(static_cast<CandidateId>(i));
  }
  // Rows indexed by candidate id; multi-word rows are unused and left zero.
  FeatureMatrix full = FeatureMatrix::Zero(Eigen::Index(candidates.size()), 8);
  FeatureMatrix uni = compute_feature_matrix(unigram_ids, ctx, cfg.threads);
  for (std::size_t i = 0; i < unigram_ids.size(); ++i) full.row(unigram_ids[i]) = uni.row(Eigen::Index(i));
  std::vector<Eigen::Index> cols(kUnigramFeatureColumns.begin(), kUnigramFeatureColumns.end());
  FeatureMatrix x = full(Eigen::all, cols);
  std::vector<std::string> names;
  for (auto c : cols) names.emplace_back(kFeatureNames[std::size_t(c)]);

  QualityModel model = train(pools, x, cfg, names);
  std::vector<double> scores = score_all(model, x, unigram_ids, cfg.threads);

  RankedPhraseList merged = multiword;
  RankedPhraseList singles = rank(corpus, candidates, unigram_ids, scores);
  merged.entries.insert(merged.entries.end(), singles.entries.begin(), singles.entries.end());
  merged.sort();
  if (model_out != nullptr) *model_out = std::move(model);
  return merged;
}

PipelineResult run_pipeline(TaggedCorpus corpus, const KnowledgeBase &kb,
                            const StopwordSet &stopwords, PipelineConfig cfg) {
  cfg.propagate_threads();
  PipelineResult r;
  r.corpus = cfg.mode == PipelineMode::kAutoSegPhrase ? corpus.without_tags() : std::move(corpus);
  const TaggedCorpus &text = r.corpus;

  r.mined = mine_candidates(text, cfg.miner);
  auto &candidates = r.mined.candidates;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].length() >= 2) r.multiword_ids.push_back(static_cast<CandidateId>(i));
  }
  log(LogLevel::kInfo, "mined " + std::to_string(candidates.size()) + " candidates (" +
                           std::to_string(r.multiword_ids.size()) + " multi-word)");
  if (r.multiword_ids.empty()) {
    log(LogLevel::kInfo, "no multi-word candidate reaches the support threshold");
    return r;
  }

  r.stats = compute_corpus_stats(text, candidates, r.mined.trie);
  r.pools = build_pools(text, candidates, kb, PoolScope::kMultiWord);
  log(LogLevel::kInfo, "positive pool " + std::to_string(r.pools->positive.size()) +
                           ", negative pool " + std::to_string(r.pools->negative.size()));
  const auto ids = all_ids(candidates.size());

  // Pass 1: raw frequencies.
  const FrequencySource raw = raw_frequency_source(text, candidates);
  r.pass1_features =
      compute_feature_matrix(ids, FeatureContext(text, candidates, r.mined.trie, raw, r.stats, stopwords),
                             cfg.threads);
  r.pass1_model = train(*r.pools, r.pass1_features, cfg.ensemble);
  std::vector<double> q1 = score_all(*r.pass1_model, r.pass1_features, r.multiword_ids, cfg.threads);
  r.pass1_ranking = rank(text, candidates, r.multiword_ids, q1);

  std::vector<double> quality(candidates.size(), 1.0);
  for (std::size_t i = 0; i < r.multiword_ids.size(); ++i) quality[r.multiword_ids[i]] = q1[i];
  for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].quality = quality[i];

  // Segmentation and rectification.
  r.viterbi = viterbi_train(text, quality, candidates, r.mined.trie, cfg.viterbi, cfg.miner.max_len);
  log(LogLevel::kInfo, "viterbi training: " + std::to_string(r.viterbi.outer_iterations) +
                           " outer / " + std::to_string(r.viterbi.inner_iterations) +
                           " inner iterations");
  r.segmentation = segment_corpus(text, r.viterbi.params, r.mined.trie, cfg.threads).segmentation;
  const FrequencySource rectified =
      rebuild_frequency_source(text, candidates, r.mined.trie, r.segmentation);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].rectified_freq = rectified.counts[i];
  }

  // Pass 2: rectified frequencies.
  r.pass2_features = compute_feature_matrix(
      ids, FeatureContext(text, candidates, r.mined.trie, rectified, r.stats, stopwords),
      cfg.threads);
  r.pass2_model = train(*r.pools, r.pass2_features, cfg.ensemble);
  std::vector<double> q2 = score_all(*r.pass2_model, r.pass2_features, r.multiword_ids, cfg.threads);
  for (std::size_t i = 0; i < r.multiword_ids.size(); ++i) candidates[r.multiword_ids[i]].quality = q2[i];
  r.ranking = rank(text, candidates, r.multiword_ids, q2);

  if (cfg.mode == PipelineMode::kAutoPhrasePlus) {
    r.ranking = extend_single_word(text, candidates, r.mined.trie, r.stats, stopwords, kb,
                                   r.ranking, cfg.ensemble, &r.unigram_model);
  }
  return r;
}

PipelineResult run_pipeline(const std::string &corpus_path, PipelineConfig cfg) {
  TaggedCorpus corpus = load_corpus(corpus_path, cfg.format);
  KnowledgeBase kb = load_knowledge_base(cfg.kb_path);
  StopwordSet stopwords =
      cfg.stopword_path.empty() ? default_stopwords() : load_stopwords(cfg.stopword_path);
  return run_pipeline(std::move(corpus), kb, stopwords, std::move(cfg));
}

RankedPhraseList run(const std::string &corpus_path, const std::string &kb_path,
                     PipelineConfig cfg) {
  cfg.kb_path = kb_path;
  return run_pipeline(corpus_path, std::move(cfg)).ranking;
}

}  // namespace phrasekit

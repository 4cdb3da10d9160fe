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

#include "phrasekit/candidates.h"

#include <algorithm>
#include <ostream>
#include <string>
#include <tuple>

#include "phrasekit/parallel.h"

namespace phrasekit {

void MinerConfig::validate() const {
  if (tau < 1) throw DataError("minimum support must be >= 1");
  if (max_len < 1) throw DataError("maximum phrase length must be >= 1");
}

CandidateTrie::CandidateTrie() : terminal_(1, kNoCandidate) {}

CandidateTrie::NodeId CandidateTrie::child(NodeId node, WordId word) const {
  if (node == kRoot) {
    return word < root_children_.size() ? root_children_[word] : kNoNode;
  }
  auto it = edges_.find(edge_key(node, word));
  return it == edges_.end() ? kNoNode : it->second;
}

void CandidateTrie::insert(std::span<const WordId> words, CandidateId id) {
  NodeId node = kRoot;
  for (WordId w : words) {
    NodeId next = child(node, w);
    if (next == kNoNode) {
      next = static_cast<NodeId>(terminal_.size());
      terminal_.push_back(kNoCandidate);
      if (node == kRoot) {
        if (w >= root_children_.size()) root_children_.resize(w + 1, kNoNode);
        root_children_[w] = next;
      } else {
        edges_.emplace(edge_key(node, w), next);
      }
    }
    node = next;
  }
  if (node != kRoot) terminal_[node] = id;
  max_depth_ = std::max(max_depth_, words.size());
}

CandidateId CandidateTrie::find(std::span<const WordId> words) const {
  NodeId node = kRoot;
  for (WordId w : words) {
    node = child(node, w);
    if (node == kNoNode) return kNoCandidate;
  }
  return node == kRoot ? kNoCandidate : terminal_[node];
}

bool CandidateTrie::is_prefix(std::span<const WordId> words) const {
  NodeId node = kRoot;
  for (WordId w : words) {
    node = child(node, w);
    if (node == kNoNode) return false;
  }
  return true;
}

void TrieWalk::iterator::advance() {
  while (pos_ < tokens_.size()) {
    node_ = trie_->child(node_, tokens_[pos_]);
    if (node_ == CandidateTrie::kNoNode) break;
    ++pos_;
    CandidateId id = trie_->candidate(node_);
    if (id != kNoCandidate) {
      current_ = {pos_, id};
      done_ = false;
      return;
    }
  }
  done_ = true;
}

CandidateTrie build_trie(const std::vector<PhraseCandidate> &candidates) {
  CandidateTrie trie;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    trie.insert(candidates[i].words, static_cast<CandidateId>(i));
  }
  return trie;
}

MinedCandidates mine_candidates(const TaggedCorpus &corpus, const MinerConfig &cfg) {
  cfg.validate();
  MinedCandidates out;
  const auto &sentences = corpus.sentences();
  const unsigned shards = resolve_threads(cfg.threads);

  // Unigrams straight from the vocabulary counts.
  const auto &freq = corpus.word_freq();
  for (WordId w = 0; w < freq.size(); ++w) {
    if (freq[w] >= cfg.tau) {
      auto id = static_cast<CandidateId>(out.candidates.size());
      out.candidates.push_back({{w}, freq[w], 0, 1.0});
      out.trie.insert(out.candidates.back().words, id);
    }
  }

  // level_node[k] = trie node of the current-length n-gram starting at flat
  // token position k, or kNoNode if that n-gram is not frequent.
  std::vector<std::size_t> offsets(sentences.size() + 1, 0);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    offsets[s + 1] = offsets[s] + sentences[s].size();
  }
  std::vector<CandidateTrie::NodeId> level_node(offsets.back(), CandidateTrie::kNoNode);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (std::size_t i = 0; i < sentences[s].size(); ++i) {
      level_node[offsets[s] + i] = out.trie.child(CandidateTrie::kRoot, sentences[s].words[i]);
    }
  }

  using CountMap = std::unordered_map<std::uint64_t, std::uint64_t>;
  auto key_of = [](CandidateTrie::NodeId parent, WordId w) {
    return (static_cast<std::uint64_t>(parent) << 32) | w;
  };

  for (std::size_t len = 2; len <= cfg.max_len; ++len) {
    std::vector<CountMap> shard_counts(shards);
    parallel_for_shards(sentences.size(), shards,
                        [&](unsigned shard, std::size_t begin, std::size_t end) {
      CountMap &counts = shard_counts[shard];
      for (std::size_t s = begin; s < end; ++s) {
        const auto &words = sentences[s].words;
        if (words.size() < len) continue;
        const std::size_t off = offsets[s];
        for (std::size_t i = 0; i + len <= words.size(); ++i) {
          CandidateTrie::NodeId prefix = level_node[off + i];
          // Both the (len-1)-prefix and the (len-1)-suffix must be frequent.
          if (prefix == CandidateTrie::kNoNode) continue;
          if (level_node[off + i + 1] == CandidateTrie::kNoNode) continue;
          ++counts[key_of(prefix, words[i + len - 1])];
        }
      }
    });

    CountMap merged = std::move(shard_counts[0]);
    for (unsigned s = 1; s < shards; ++s) {
      for (const auto &[k, c] : shard_counts[s]) merged[k] += c;
    }

    // (parent candidate, word, count) for every frequent extension, in
    // lexicographic word-id order.
    std::vector<std::tuple<CandidateId, WordId, std::uint64_t>> frequent;
    for (const auto &[k, c] : merged) {
      if (c < cfg.tau) continue;
      auto parent = static_cast<CandidateTrie::NodeId>(k >> 32);
      frequent.emplace_back(out.trie.candidate(parent), static_cast<WordId>(k & 0xffffffffu), c);
    }
    if (frequent.empty()) break;
    std::sort(frequent.begin(), frequent.end());
    for (const auto &[parent, w, c] : frequent) {
      PhraseCandidate cand;
      cand.words = out.candidates[parent].words;
      cand.words.push_back(w);
      cand.raw_freq = c;
      auto id = static_cast<CandidateId>(out.candidates.size());
      out.trie.insert(cand.words, id);
      out.candidates.push_back(std::move(cand));
    }

    parallel_for_shards(sentences.size(), shards,
                        [&](unsigned, std::size_t begin, std::size_t end) {
      for (std::size_t s = begin; s < end; ++s) {
        const auto &words = sentences[s].words;
        const std::size_t off = offsets[s];
        for (std::size_t i = 0; i < words.size(); ++i) {
          auto &node = level_node[off + i];
          if (node == CandidateTrie::kNoNode) continue;
          node = i + len <= words.size() ? out.trie.child(node, words[i + len - 1])
                                         : CandidateTrie::kNoNode;
        }
      }
    });
  }
  return out;
}

void write_candidates(std::ostream &out, const TaggedCorpus &corpus,
                      const std::vector<PhraseCandidate> &candidates) {
  std::vector<std::pair<std::uint64_t, std::string>> rows;
  rows.reserve(candidates.size());
  for (const auto &c : candidates) rows.emplace_back(c.raw_freq, corpus.phrase_text(c.words));
  std::sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (const auto &[freq, text] : rows) out << freq << '\t' << text << '\n';
}

}  // namespace phrasekit

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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <span>
#include <unordered_map>
#include <vector>

#include "phrasekit/common.h"
#include "phrasekit/corpus.h"

namespace phrasekit {

struct PhraseCandidate {
  std::vector<WordId> words;
  std::uint64_t raw_freq = 0;
  // Set by rectification; stays 0 until then.
  std::uint64_t rectified_freq = 0;
  // Phrase quality; unigrams default to 1.
  double quality = 0.0;

  std::size_t length() const { return words.size(); }
};

struct MinerConfig {
  std::uint64_t tau = 30;    // minimum raw frequency
  std::size_t max_len = 6;   // maximum phrase length in words
  unsigned threads = 1;

  void validate() const;
};

// Prefix tree over word-id sequences. Every node stands for a prefix of at
// least one inserted sequence; terminal nodes carry a candidate id.
class CandidateTrie {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNoNode = static_cast<NodeId>(-1);

  CandidateTrie();

  void insert(std::span<const WordId> words, CandidateId id);
  NodeId child(NodeId node, WordId word) const;
  CandidateId candidate(NodeId node) const { return terminal_[node]; }
  std::size_t node_count() const { return terminal_.size(); }
  std::size_t max_depth() const { return max_depth_; }

  // Candidate id of an exact sequence, or kNoCandidate.
  CandidateId find(std::span<const WordId> words) const;
  // True if `words` is a candidate or a prefix of one.
  bool is_prefix(std::span<const WordId> words) const;

 private:
  static std::uint64_t edge_key(NodeId node, WordId word) {
    return (static_cast<std::uint64_t>(node) << 32) | word;
  }

  std::vector<CandidateId> terminal_;
  std::vector<NodeId> root_children_;  // dense, indexed by word id
  std::unordered_map<std::uint64_t, NodeId> edges_;
  std::size_t max_depth_ = 0;
};

// A candidate found by a trie walk: tokens [start, end) form candidate `id`.
struct TrieMatch {
  std::size_t end;
  CandidateId id;

  bool operator==(const TrieMatch &) const = default;
};

// Input range over the candidates that start at a fixed position, in
// increasing end order. The walk stops at the first extension that is not a
// trie prefix.
class TrieWalk {
 public:
  class iterator {
   public:
    using value_type = TrieMatch;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    const TrieMatch &operator*() const { return current_; }
    const TrieMatch *operator->() const { return &current_; }
    iterator &operator++() {
      advance();
      return *this;
    }
    void operator++(int) { advance(); }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    friend class TrieWalk;
    iterator(const CandidateTrie *trie, std::span<const WordId> tokens, std::size_t start)
        : trie_(trie), tokens_(tokens), pos_(start), node_(CandidateTrie::kRoot) {
      advance();
    }
    void advance();

    const CandidateTrie *trie_ = nullptr;
    std::span<const WordId> tokens_;
    std::size_t pos_ = 0;
    CandidateTrie::NodeId node_ = CandidateTrie::kRoot;
    TrieMatch current_{0, kNoCandidate};
    bool done_ = true;
  };

  TrieWalk(const CandidateTrie &trie, std::span<const WordId> tokens, std::size_t start)
      : trie_(&trie), tokens_(tokens), start_(start) {}

  iterator begin() const { return iterator(trie_, tokens_, start_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  const CandidateTrie *trie_;
  std::span<const WordId> tokens_;
  std::size_t start_;
};

inline TrieWalk trie_walk(const CandidateTrie &trie, std::span<const WordId> tokens,
                          std::size_t start) {
  return TrieWalk(trie, tokens, start);
}

struct MinedCandidates {
  std::vector<PhraseCandidate> candidates;
  CandidateTrie trie;
};

// All within-sentence n-grams of length <= max_len whose overlapping
// occurrence count is at least tau. Candidate ids are ordered by length, then
// by the ids of their words; the result is independent of cfg.threads.
MinedCandidates mine_candidates(const TaggedCorpus &corpus, const MinerConfig &cfg);

// Builds a trie over an explicit candidate list (ids = list positions).
CandidateTrie build_trie(const std::vector<PhraseCandidate> &candidates);

// TSV dump `raw_freq<TAB>phrase`, descending raw_freq, ties by phrase text.
void write_candidates(std::ostream &out, const TaggedCorpus &corpus,
                      const std::vector<PhraseCandidate> &candidates);

}  // namespace phrasekit

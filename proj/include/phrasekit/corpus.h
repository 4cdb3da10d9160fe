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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phrasekit/common.h"

namespace phrasekit {

// Bidirectional string <-> dense id table. Ids are assigned in first-seen
// order.
class Interner {
 public:
  std::uint32_t intern(std::string_view s);
  std::optional<std::uint32_t> find(std::string_view s) const;
  const std::string &name(std::uint32_t id) const { return names_[id]; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string> &names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Tag assigned to every token of an untagged corpus.
inline constexpr std::string_view kUntaggedTag = "UNTAGGED";

// Marker line separating documents in a corpus file.
inline constexpr std::string_view kDocMarker = "#DOC";

enum class CorpusFormat {
  kTagged,    // word<TAB>tag per line
  kUntagged,  // word per line
};

// One token as seen by callers. `word` is the interned lowercase form used for
// matching; `surface` is the text as it appeared in the input.
struct Token {
  std::string_view surface;
  WordId word;
  TagId tag;
};

struct Sentence {
  std::vector<WordId> words;
  std::vector<TagId> tags;
  std::vector<std::string> surface;
  DocId doc = 0;

  std::size_t size() const { return words.size(); }
  Token token(std::size_t i) const { return {surface[i], words[i], tags[i]}; }
};

// Case normalization for matching: ASCII letters are lowercased, all other
// bytes are kept. Idempotent.
std::string normalize_word(std::string_view word);

// A loaded corpus. Immutable after construction; safe to share read-only.
class TaggedCorpus {
 public:
  const std::vector<Sentence> &sentences() const { return sentences_; }
  std::size_t n_tokens() const { return n_tokens_; }
  std::size_t n_docs() const { return n_docs_; }

  const Interner &tagset() const { return tags_; }
  const Interner &vocabulary() const { return words_; }
  // Token frequency of each normalized word, indexed by WordId.
  const std::vector<std::uint64_t> &word_freq() const { return word_freq_; }

  // Splits a space separated phrase into word ids; nullopt if any word is not
  // in the vocabulary. Words are normalized first.
  std::optional<std::vector<WordId>> lookup_phrase(std::string_view phrase) const;
  // Space separated normalized form of a word-id sequence.
  std::string phrase_text(std::span<const WordId> words) const;

  // Same text with every tag replaced by UNTAGGED.
  TaggedCorpus without_tags() const;

  // Builder interface used by the loader and by tests that assemble corpora
  // in memory.
  void add_sentence(const std::vector<std::pair<std::string, std::string>> &tokens,
                    DocId doc);
  void set_doc_count(std::size_t n) { n_docs_ = n; }

 private:
  std::vector<Sentence> sentences_;
  std::size_t n_tokens_ = 0;
  std::size_t n_docs_ = 0;
  Interner tags_;
  Interner words_;
  std::vector<std::uint64_t> word_freq_;
};

// Reads a corpus file. Blank lines end sentences; a line holding only #DOC ends
// the current document. Without any #DOC marker the file is one document.
TaggedCorpus load_corpus(const std::string &path, CorpusFormat format);
TaggedCorpus load_corpus_untagged(const std::string &path);

// Stream variants; `name` is used in error messages.
TaggedCorpus read_corpus(std::istream &in, CorpusFormat format,
                         const std::string &name = "<stream>");

// Canonical serialization: one token per line, one blank line between
// sentences of a document, a #DOC line between documents. Tagged corpora write
// word<TAB>tag, untagged ones only the word.
void write_corpus(std::ostream &out, const TaggedCorpus &corpus, CorpusFormat format);

}  // namespace phrasekit

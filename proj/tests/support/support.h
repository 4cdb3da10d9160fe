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
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "phrasekit/corpus.h"
#include "phrasekit/quality.h"

namespace phrasekit::testing {

using TokenList = std::vector<std::pair<std::string, std::string>>;

// Corpus from file-format text.
TaggedCorpus parse(const std::string &text, CorpusFormat format = CorpusFormat::kTagged);

// One document holding the given sentences.
TaggedCorpus make_corpus(const std::vector<TokenList> &sentences);

// Sentence tokens from "word/TAG word/TAG ...".
TokenList tokens(const std::string &slashed);

// The three sentences of the Great Firewall example. Its ideal segmentation
// is returned by example3_boundaries().
TaggedCorpus example3_corpus();
std::vector<std::vector<std::uint32_t>> example3_boundaries();

// Removed, with its contents, on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string file(const std::string &name) const { return (path_ / name).string(); }
  std::string write(const std::string &name, const std::string &contents) const;

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::string &path);

// Topical documents built from sentence templates. Planted multi-word phrases
// use words found nowhere else; planted unigrams stand alone as noun phrases;
// everything else is drawn from a shared pool of generic words.
struct PlantedSpec {
  std::size_t sentences = 2000;
  std::size_t phrases = 50;
  std::size_t unigrams = 0;
  std::size_t topics = 10;
  std::size_t sentences_per_doc = 20;
  std::size_t generic_nouns = 40;
  std::size_t generic_adjectives = 20;
  std::size_t generic_verbs = 20;
  std::uint64_t seed = 1;
};

struct PlantedCorpus {
  std::string text;  // tagged corpus file contents
  std::vector<std::string> phrases;
  std::vector<std::string> unigrams;
  std::vector<std::string> generic_words;
};

PlantedCorpus make_planted_corpus(const PlantedSpec &shape);

// Knowledge base holding every `stride`-th element of each list.
KnowledgeBase every_other(const std::vector<std::string> &phrases, std::size_t stride = 2,
                          const std::vector<std::string> &more = {});

std::string kb_text(const KnowledgeBase &kb);

}  // namespace phrasekit::testing

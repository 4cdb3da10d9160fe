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

#include "phrasekit/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>

namespace phrasekit {

std::uint32_t Interner::intern(std::string_view s) {
  auto it = ids_.find(std::string(s));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(s);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Interner::find(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string normalize_word(std::string_view word) {
  std::string out(word);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

void TaggedCorpus::add_sentence(
    const std::vector<std::pair<std::string, std::string>> &tokens, DocId doc) {
  if (tokens.empty()) return;
  Sentence s;
  s.doc = doc;
  s.words.reserve(tokens.size());
  s.tags.reserve(tokens.size());
  s.surface.reserve(tokens.size());
  for (const auto &[word, tag] : tokens) {
    WordId w = words_.intern(normalize_word(word));
    if (w >= word_freq_.size()) word_freq_.resize(w + 1, 0);
    ++word_freq_[w];
    s.words.push_back(w);
    s.tags.push_back(tags_.intern(tag));
    s.surface.push_back(word);
  }
  n_tokens_ += tokens.size();
  if (doc + 1 > n_docs_) n_docs_ = doc + 1;
  sentences_.push_back(std::move(s));
}

std::optional<std::vector<WordId>> TaggedCorpus::lookup_phrase(
    std::string_view phrase) const {
  std::vector<WordId> ids;
  std::size_t pos = 0;
  while (pos < phrase.size()) {
    std::size_t end = phrase.find(' ', pos);
    if (end == std::string_view::npos) end = phrase.size();
    if (end > pos) {
      auto id = words_.find(normalize_word(phrase.substr(pos, end - pos)));
      if (!id) return std::nullopt;
      ids.push_back(*id);
    }
    pos = end + 1;
  }
  if (ids.empty()) return std::nullopt;
  return ids;
}

std::string TaggedCorpus::phrase_text(std::span<const WordId> words) const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words_.name(words[i]);
  }
  return out;
}

TaggedCorpus TaggedCorpus::without_tags() const {
  TaggedCorpus out;
  for (const auto &s : sentences_) {
    std::vector<std::pair<std::string, std::string>> tokens;
    tokens.reserve(s.size());
    for (const auto &w : s.surface) tokens.emplace_back(w, std::string(kUntaggedTag));
    out.add_sentence(tokens, s.doc);
  }
  out.n_docs_ = n_docs_;
  return out;
}

namespace {

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

// A field is valid when it is non-empty and holds no whitespace or control
// bytes.
bool valid_field(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (c <= 0x20 || c == 0x7f) return false;
  }
  return true;
}

}  // namespace

TaggedCorpus read_corpus(std::istream &in, CorpusFormat format, const std::string &name) {
  TaggedCorpus corpus;
  std::vector<std::pair<std::string, std::string>> sentence;
  DocId doc = 0;
  bool doc_has_sentences = false;

  auto flush = [&] {
    if (sentence.empty()) return;
    corpus.add_sentence(sentence, doc);
    sentence.clear();
    doc_has_sentences = true;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (line == kDocMarker) {
      flush();
      if (doc_has_sentences) {
        ++doc;
        doc_has_sentences = false;
      }
      continue;
    }
    std::string_view view(line);
    std::size_t tab = view.find('\t');
    if (format == CorpusFormat::kUntagged) {
      if (tab != std::string_view::npos) {
        throw ParseError(name, line_no, "tagged record in untagged corpus");
      }
      if (!valid_field(view)) {
        throw ParseError(name, line_no, "word contains whitespace or control characters");
      }
      sentence.emplace_back(line, std::string(kUntaggedTag));
      continue;
    }
    if (tab == std::string_view::npos) {
      throw ParseError(name, line_no, "missing POS tag (expected word<TAB>tag)");
    }
    std::string_view word = view.substr(0, tab);
    std::string_view tag = view.substr(tab + 1);
    if (tag.find('\t') != std::string_view::npos) {
      throw ParseError(name, line_no, "embedded tab in token record");
    }
    if (!valid_field(word)) {
      throw ParseError(name, line_no, "word is empty or contains whitespace/control characters");
    }
    if (!valid_field(tag)) {
      throw ParseError(name, line_no, "tag is empty or contains whitespace/control characters");
    }
    sentence.emplace_back(std::string(word), std::string(tag));
  }
  flush();
  if (corpus.n_tokens() == 0) throw DataError(name + ": corpus is empty");
  corpus.set_doc_count(doc_has_sentences ? doc + 1 : doc);
  return corpus;
}

TaggedCorpus load_corpus(const std::string &path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return read_corpus(in, format, path);
}

TaggedCorpus load_corpus_untagged(const std::string &path) {
  return load_corpus(path, CorpusFormat::kUntagged);
}

void write_corpus(std::ostream &out, const TaggedCorpus &corpus, CorpusFormat format) {
  const auto &sentences = corpus.sentences();
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const Sentence &s = sentences[i];
    if (i > 0) {
      if (s.doc != sentences[i - 1].doc) {
        out << kDocMarker << '\n';
      } else {
        out << '\n';
      }
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
      out << s.surface[k];
      if (format == CorpusFormat::kTagged) out << '\t' << corpus.tagset().name(s.tags[k]);
      out << '\n';
    }
  }
}

}  // namespace phrasekit

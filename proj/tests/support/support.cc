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

#include "support.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace phrasekit::testing {

namespace fs = std::filesystem;

TaggedCorpus parse(const std::string &text, CorpusFormat format) {
  std::istringstream in(text);
  return read_corpus(in, format, "<test>");
}

TaggedCorpus make_corpus(const std::vector<TokenList> &sentences) {
  TaggedCorpus c;
  for (const auto &s : sentences) c.add_sentence(s, 0);
  c.set_doc_count(1);
  return c;
}

TokenList tokens(const std::string &slashed) {
  TokenList out;
  std::istringstream in(slashed);
  std::string item;
  while (in >> item) {
    auto slash = item.rfind('/');
    out.emplace_back(item.substr(0, slash), item.substr(slash + 1));
  }
  return out;
}

TaggedCorpus example3_corpus() {
  return make_corpus({tokens("the/DT Great/JJ Firewall/NNP is/VBZ"),
                      tokens("This/DT is/VBZ a/DT great/JJ firewall/NN software/NN ./."),
                      tokens("The/DT discriminative/JJ classifier/NN SVM/NNP is/VBZ")});
}

std::vector<std::vector<std::uint32_t>> example3_boundaries() {
  return {{0, 1, 3, 4}, {0, 1, 2, 3, 4, 6, 7}, {0, 1, 3, 4, 5}};
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  path_ = fs::temp_directory_path() /
          ("phrasekit-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string TempDir::write(const std::string &name, const std::string &contents) const {
  std::string p = file(name);
  std::ofstream(p, std::ios::binary) << contents;
  return p;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

namespace {

class WordFactory {
 public:
  explicit WordFactory(std::mt19937_64 &rng) : rng_(rng) {
    for (const char *w : {"the", "a", "of", "in", "and", "is", "with", "we", "for", "this"}) {
      used_.insert(w);
    }
  }

  std::string make() {
    static constexpr const char *kOnset[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                             "p", "r", "s", "t", "v", "z", "ch", "tr"};
    static constexpr const char *kVowel[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    for (;;) {
      std::string w;
      const int syllables = 2 + int(rng_() % 2);
      for (int i = 0; i < syllables; ++i) {
        w += kOnset[rng_() % std::size(kOnset)];
        w += kVowel[rng_() % std::size(kVowel)];
      }
      if (rng_() % 2) w += "n";
      if (used_.insert(w).second) return w;
    }
  }

 private:
  std::mt19937_64 &rng_;
  std::set<std::string> used_;
};

using Tagged = std::vector<std::pair<std::string, std::string>>;

}  // namespace

PlantedCorpus make_planted_corpus(const PlantedSpec &shape) {
  std::mt19937_64 rng(shape.seed);
  WordFactory words(rng);
  PlantedCorpus out;

  auto uniform = [&](std::size_t n) { return std::size_t(rng() % n); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

  std::vector<Tagged> phrases;
  for (std::size_t i = 0; i < shape.phrases; ++i) {
    const std::size_t len = i % 3 == 2 ? 3 : 2;
    Tagged p;
    for (std::size_t k = 0; k < len; ++k) {
      const bool adj = k == 0 && i % 2 == 0;
      p.emplace_back(words.make(), adj ? "JJ" : "NN");
    }
    std::string text;
    for (const auto &[w, t] : p) text += (text.empty() ? "" : " ") + w;
    out.phrases.push_back(text);
    phrases.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < shape.unigrams; ++i) out.unigrams.push_back(words.make());

  std::vector<std::string> nouns, adjs, verbs;
  for (std::size_t i = 0; i < shape.generic_nouns; ++i) nouns.push_back(words.make());
  for (std::size_t i = 0; i < shape.generic_adjectives; ++i) adjs.push_back(words.make());
  for (std::size_t i = 0; i < shape.generic_verbs; ++i) verbs.push_back(words.make() + "s");
  for (const auto *list : {&nouns, &adjs, &verbs}) {
    out.generic_words.insert(out.generic_words.end(), list->begin(), list->end());
  }

  const std::size_t topics = std::max<std::size_t>(1, shape.topics);
  auto topical = [&](std::size_t topic, std::size_t n) {
    // Items of one topic are i = topic, topic + topics, ...
    std::size_t per = (n + topics - 1 - topic % topics) / topics;
    if (per == 0) return uniform(n);
    return topic % topics + topics * uniform(per);
  };

  auto noun_phrase = [&](std::size_t topic, bool planted, Tagged &s) {
    if (planted && !phrases.empty()) {
      const std::size_t i = chance(0.85) ? topical(topic, phrases.size()) : uniform(phrases.size());
      s.insert(s.end(), phrases[i].begin(), phrases[i].end());
      return;
    }
    if (!out.unigrams.empty() && chance(0.35)) {
      const std::size_t n = out.unigrams.size();
      s.emplace_back(out.unigrams[chance(0.85) ? topical(topic, n) : uniform(n)], "NN");
      return;
    }
    if (chance(0.4)) s.emplace_back(adjs[uniform(adjs.size())], "JJ");
    s.emplace_back(nouns[uniform(nouns.size())], "NN");
  };

  std::ostringstream text;
  const std::size_t per_doc = std::max<std::size_t>(1, shape.sentences_per_doc);
  for (std::size_t n = 0; n < shape.sentences; ++n) {
    const std::size_t doc = n / per_doc;
    if (n > 0) text << (n % per_doc == 0 ? "#DOC\n" : "\n");
    const std::size_t topic = doc % topics;
    auto np = [&](Tagged &s, bool first) { noun_phrase(topic, first || chance(0.45), s); };
    auto verb = [&](Tagged &s) { s.emplace_back(verbs[uniform(verbs.size())], "VBZ"); };

    Tagged s;
    switch (uniform(4)) {
      case 0:
        s.emplace_back("the", "DT");
        np(s, true);
        verb(s);
        s.emplace_back("the", "DT");
        np(s, false);
        break;
      case 1:
        np(s, true);
        verb(s);
        np(s, false);
        s.emplace_back("in", "IN");
        s.emplace_back("the", "DT");
        np(s, false);
        break;
      case 2:
        s.emplace_back("a", "DT");
        np(s, false);
        verb(s);
        s.emplace_back("with", "IN");
        np(s, true);
        break;
      default:
        s.emplace_back("we", "PRP");
        verb(s);
        np(s, true);
        s.emplace_back("and", "CC");
        np(s, false);
        break;
    }
    s.emplace_back(".", ".");
    for (const auto &[w, t] : s) text << w << '\t' << t << '\n';
  }
  out.text = text.str();
  return out;
}

KnowledgeBase every_other(const std::vector<std::string> &phrases, std::size_t stride,
                          const std::vector<std::string> &more) {
  KnowledgeBase kb;
  for (std::size_t i = 0; i < phrases.size(); i += stride) kb.insert(phrases[i]);
  for (std::size_t i = 0; i < more.size(); i += stride) kb.insert(more[i]);
  return kb;
}

std::string kb_text(const KnowledgeBase &kb) {
  std::vector<std::string> sorted(kb.begin(), kb.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto &p : sorted) out += p + "\n";
  return out;
}

}  // namespace phrasekit::testing

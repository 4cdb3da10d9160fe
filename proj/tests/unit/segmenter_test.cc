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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "phrasekit/segmenter.h"
#include "support.h"

using namespace phrasekit;
using phrasekit::testing::example3_boundaries;
using phrasekit::testing::example3_corpus;
using phrasekit::testing::make_corpus;
using phrasekit::testing::TokenList;
using phrasekit::testing::tokens;

namespace {

struct Model {
  std::vector<PhraseCandidate> candidates;
  CandidateTrie trie;
  SegmenterParams params;

  CandidateId id(const TaggedCorpus &c, const char *phrase) const {
    return trie.find(*c.lookup_phrase(phrase));
  }
};

// Candidates in the listed order, theta and quality zero, delta uniform.
Model model_for(const TaggedCorpus &c, std::vector<std::string> phrases, double delta = 0.5) {
  Model m;
  for (const auto &p : phrases) m.candidates.push_back({*c.lookup_phrase(p), 1, 0, 0.0});
  m.trie = build_trie(m.candidates);
  m.params.delta = PosTransitionTable(c.tagset().size(), delta);
  m.params.theta.theta.assign(phrases.size(), 0.0);
  m.params.quality.assign(phrases.size(), 1.0);
  return m;
}

CorpusSegmentation as_segmentation(const std::vector<std::vector<std::uint32_t>> &bs) {
  CorpusSegmentation seg;
  for (const auto &b : bs) seg.push_back({b});
  return seg;
}

TagId tag(const TaggedCorpus &c, const char *name) { return *c.tagset().find(name); }

}  // namespace

TEST_CASE("pos quality of a segment") {
  auto c = make_corpus({tokens("x/A y/B z/C")});
  PosTransitionTable d(c.tagset().size());
  d(0, 1) = 0.8;  // A B
  d(1, 2) = 0.3;  // B C
  const auto &t = c.sentences()[0].tags;
  CHECK(pos_quality(d, t, 0, 2) == doctest::Approx(0.8 * 0.7));
  CHECK(pos_quality(d, t, 0, 1) == doctest::Approx(0.2));
  CHECK(pos_quality(d, t, 2, 3) == 1.0);
  CHECK(pos_quality(d, t, 1, 3) == doctest::Approx(0.3));
  CHECK(pos_quality(d, t, 0, 3) == doctest::Approx(0.24));
}

TEST_CASE("uniform delta is a length penalty") {
  auto c = make_corpus({tokens("a/X b/X c/X d/X e/X f/X g/X")});
  const auto &t = c.sentences()[0].tags;
  for (double v : {0.1, 0.5, 0.9}) {
    PosTransitionTable d(1, v);
    for (std::size_t len = 1; len <= 5; ++len) {
      CHECK(pos_quality(d, t, 1, 1 + len) == doctest::Approx(std::pow(v, len - 1) * (1 - v)));
    }
    CHECK(pos_quality(d, t, 4, 7) == doctest::Approx(v * v));
  }
}

TEST_CASE("the best segmentation of a short sentence") {
  auto c = make_corpus({tokens("x/A y/B z/C")});
  auto m = model_for(c, {"x", "y", "z", "x y", "y z"});
  for (int i = 0; i < 3; ++i) m.params.theta.theta[i] = 1.0 / 3;
  m.params.theta.theta[3] = m.params.theta.theta[4] = 0.5;
  m.params.quality[3] = 0.9;
  m.params.quality[4] = 0.2;
  auto s = segment_sentence(c.sentences()[0], m.params, m.trie);
  CHECK(s.boundaries.b == std::vector<std::uint32_t>{0, 2, 3});
  CHECK(s.log_likelihood == doctest::Approx(std::log(0.25 * 0.5 * 0.9 / 3)));

  // Lowering Q(x y) makes the all-singleton reading win.
  m.params.quality[3] = 0.1;
  s = segment_sentence(c.sentences()[0], m.params, m.trie);
  CHECK(s.boundaries.b == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(s.log_likelihood == doctest::Approx(std::log(0.25 / 27)));
}

TEST_CASE("ties keep the earliest predecessor") {
  auto c = make_corpus({tokens("a/X a/X a/X a/X")});
  auto m = model_for(c, {"a", "a a"});
  m.params.theta.theta = {1.0, 1.0};
  auto s = segment_sentence(c.sentences()[0], m.params, m.trie);
  CHECK(s.boundaries.b == std::vector<std::uint32_t>{0, 2, 4});
}

TEST_CASE("segments longer than max_len are not used") {
  auto c = make_corpus({tokens("a/X b/X c/X")});
  auto m = model_for(c, {"a", "b", "c", "a b c"}, 0.9);
  m.params.theta.theta = {0.01, 0.01, 0.01, 1.0};
  m.params.max_len = 3;
  CHECK(segment_sentence(c.sentences()[0], m.params, m.trie).boundaries.b.size() == 2);
  m.params.max_len = 2;
  CHECK(segment_sentence(c.sentences()[0], m.params, m.trie).boundaries.b.size() == 4);
}

TEST_CASE("tokens that are not candidates become floor singletons") {
  auto c = make_corpus({tokens("x/A z/A")});
  auto m = model_for(c, {"x"});
  m.params.theta.theta = {0.5};
  auto s = segment_sentence(c.sentences()[0], m.params, m.trie);
  CHECK(s.boundaries.b == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(s.log_likelihood == doctest::Approx(std::log(0.5 * 0.5) + std::log(1e-8)));
}

TEST_CASE("zero delta is clamped when scoring") {
  auto c = make_corpus({tokens("x/A y/A")});
  auto m = model_for(c, {"x", "y", "x y"}, 0.0);
  m.params.theta.theta = {0.5, 0.5, 1.0};
  CHECK(m.params.delta.effective(0, 0) == PosTransitionTable::kClamp);
  auto s = segment_sentence(c.sentences()[0], m.params, m.trie);
  CHECK(std::isfinite(s.log_likelihood));
  CHECK(s.boundaries.b == std::vector<std::uint32_t>{0, 1, 2});
  const double lx = segment_log_score(c.sentences()[0].words, c.sentences()[0].tags, 0, 2,
                                      m.params, m.trie);
  CHECK(lx == doctest::Approx(std::log(1e-8)));
}

TEST_CASE("fixed segmentation likelihood agrees with the decoder") {
  auto c = example3_corpus();
  auto mined = mine_candidates(c, {1, 3, 1});
  SegmenterParams p;
  p.delta = PosTransitionTable(c.tagset().size());
  p.theta = initial_theta(mined.candidates);
  p.quality.assign(mined.candidates.size(), 0.7);
  p.max_len = 3;
  auto best = segment_corpus(c, p, mined.trie);
  CHECK(corpus_log_likelihood(c, best.segmentation, p, mined.trie) ==
        doctest::Approx(best.log_likelihood));
  auto other = as_segmentation(example3_boundaries());
  CHECK(corpus_log_likelihood(c, other, p, mined.trie) <= best.log_likelihood + 1e-12);
}

TEST_CASE("delta update from a segmentation") {
  auto c = example3_corpus();
  auto seg = as_segmentation(example3_boundaries());
  auto d = update_delta(c, seg);
  CHECK(d(tag(c, "JJ"), tag(c, "NN")) == 0.5);
  CHECK(d(tag(c, "DT"), tag(c, "JJ")) == 0.0);
  CHECK(d(tag(c, "JJ"), tag(c, "NNP")) == 1.0);
  CHECK(d(tag(c, "NN"), tag(c, "NN")) == 1.0);
  CHECK(d(tag(c, "NNP"), tag(c, "VBZ")) == 0.0);
  CHECK(d(tag(c, "VBZ"), tag(c, "VBZ")) == PosTransitionTable::kDefault);

  auto counts = count_tag_pairs(c, seg);
  CHECK(counts.total.sum() == 3 + 6 + 4);
  CHECK(counts.internal.sum() == 3);
}

TEST_CASE("theta update from a segmentation") {
  auto c = example3_corpus();
  auto mined = mine_candidates(c, {1, 2, 1});
  auto seg = as_segmentation(example3_boundaries());
  auto theta = update_theta(c, seg, mined.candidates, mined.trie);
  auto id = [&](const char *p) { return mined.trie.find(*c.lookup_phrase(p)); };
  CHECK(theta.theta[id("great firewall")] == doctest::Approx(1.0 / 3));
  CHECK(theta.theta[id("firewall software")] == doctest::Approx(1.0 / 3));
  CHECK(theta.theta[id("discriminative classifier")] == doctest::Approx(1.0 / 3));
  CHECK(theta.theta[id("classifier svm")] == 0.0);
  CHECK(theta.theta[id("is")] == doctest::Approx(0.3));
  CHECK(theta.theta[id("the")] == doctest::Approx(0.2));
  CHECK(theta.theta[id("firewall")] == 0.0);

  std::vector<double> sums(3, 0.0);
  for (CandidateId i = 0; i < mined.candidates.size(); ++i) {
    sums[mined.candidates[i].length()] += theta.theta[i];
  }
  CHECK(std::abs(sums[1] - 1.0) < 1e-12);
  CHECK(std::abs(sums[2] - 1.0) < 1e-12);
}

TEST_CASE("initial theta normalizes raw counts per length") {
  auto c = example3_corpus();
  auto mined = mine_candidates(c, {1, 3, 1});
  auto theta = initial_theta(mined.candidates);
  std::vector<double> sums(4, 0.0);
  for (CandidateId i = 0; i < mined.candidates.size(); ++i) {
    sums[mined.candidates[i].length()] += theta.theta[i];
    CHECK(theta.theta[i] > 0.0);
  }
  for (std::size_t len = 1; len <= 3; ++len) CHECK(std::abs(sums[len] - 1.0) < 1e-12);
}

TEST_CASE("training with no iterations keeps the initial parameters") {
  auto c = example3_corpus();
  auto mined = mine_candidates(c, {1, 3, 1});
  std::vector<double> q(mined.candidates.size(), 0.5);
  auto r = viterbi_train(c, q, mined.candidates, mined.trie, {0, 0, 1e-4, 1}, 3);
  CHECK(r.log_likelihood_trace.empty());
  CHECK(r.outer_iterations == 0);
  CHECK(r.params.theta.theta == initial_theta(mined.candidates).theta);
  CHECK((r.params.delta.matrix().array() == PosTransitionTable::kDefault).all());
  CHECK(r.params.quality == q);
}

TEST_CASE("untagged training learns the share of joined pairs") {
  std::vector<TokenList> sentences;
  for (int i = 0; i < 30; ++i) sentences.push_back(tokens("x/T y/T"));
  for (int i = 0; i < 10; ++i) sentences.push_back(tokens("p/T q/T"));
  auto c = make_corpus(sentences);
  auto m = model_for(c, {"x", "y", "p", "q", "x y"});
  for (auto &cand : m.candidates) cand.raw_freq = 10;
  m.candidates[0].raw_freq = m.candidates[1].raw_freq = m.candidates[4].raw_freq = 30;
  std::vector<double> q(5, 1.0);
  auto r = viterbi_train(c, q, m.candidates, m.trie, {10, 10, 1e-6, 1}, 2);
  REQUIRE(r.params.delta.tag_count() == 1);
  CHECK(r.params.delta(0, 0) == doctest::Approx(0.75));
  for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i) {
    CHECK(r.log_likelihood_trace[i] >= r.log_likelihood_trace[i - 1] - 1e-9);
  }
}

TEST_CASE("a pair that is always joined drives delta to one") {
  std::vector<TokenList> sentences;
  for (int i = 0; i < 20; ++i) sentences.push_back(tokens("new/JJ york/NNP is/VBZ big/JJ"));
  auto c = make_corpus(sentences);
  auto m = model_for(c, {"new", "york", "is", "big", "new york"});
  for (auto &cand : m.candidates) cand.raw_freq = 20;
  auto r = viterbi_train(c, std::vector<double>(5, 1.0), m.candidates, m.trie, {5, 5, 1e-6, 1}, 2);
  CHECK(r.params.delta(tag(c, "JJ"), tag(c, "NNP")) == 1.0);
  CHECK(r.params.delta(tag(c, "NNP"), tag(c, "VBZ")) == 0.0);
  CHECK(r.params.theta.theta[4] == 1.0);
}

TEST_CASE("segmentation output") {
  auto c = testing::parse("The\tDT\nGreat\tJJ\nFirewall\tNNP\n\nok\tUH\n#DOC\nSVM\tNNP\nis\tVBZ\n",
                          CorpusFormat::kTagged);
  auto seg = as_segmentation({{0, 1, 3}, {0, 1}, {0, 2}});
  std::ostringstream out;
  write_segmentation(out, c, seg);
  CHECK(out.str() == "The [Great_Firewall]\nok\n#DOC\n[SVM_is]\n");
}

TEST_CASE("corpus segmentation does not depend on threads") {
  testing::PlantedSpec shape;
  shape.sentences = 600;
  auto planted = testing::make_planted_corpus(shape);
  auto c = testing::parse(planted.text, CorpusFormat::kTagged);
  auto mined = mine_candidates(c, {5, 4, 1});
  std::vector<double> q(mined.candidates.size());
  for (CandidateId i = 0; i < q.size(); ++i) q[i] = mined.candidates[i].length() == 1 ? 1.0 : 0.6;
  auto one = viterbi_train(c, q, mined.candidates, mined.trie, {3, 3, 1e-6, 1}, 4);
  auto four = viterbi_train(c, q, mined.candidates, mined.trie, {3, 3, 1e-6, 4}, 4);
  CHECK(one.log_likelihood_trace == four.log_likelihood_trace);
  CHECK(one.params.theta.theta == four.params.theta.theta);
  CHECK(one.params.delta.matrix() == four.params.delta.matrix());
  auto s1 = segment_corpus(c, one.params, mined.trie, 1);
  auto s4 = segment_corpus(c, one.params, mined.trie, 4);
  CHECK(s1.segmentation == s4.segmentation);
  CHECK(s1.log_likelihood == s4.log_likelihood);
}

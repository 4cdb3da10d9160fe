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

#include "phrasekit/model_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace phrasekit {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw DataError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

namespace {

void write_forest(std::ostream &out, std::string_view name, const QualityModel &m) {
  out << "forest " << name << '\n';
  out << "trees " << m.tree_count() << '\n';
  out << "k_samples " << m.k_samples() << '\n';
  out << "seed " << m.seed() << '\n';
  out << "features " << m.feature_names().size();
  for (const auto &f : m.feature_names()) out << ' ' << f;
  out << '\n';
  for (std::size_t t = 0; t < m.tree_count(); ++t) {
    const auto &nodes = m.trees()[t].nodes();
    out << "tree " << t << ' ' << nodes.size() << '\n';
    for (const auto &n : nodes) {
      out << n.feature << ' ' << format_double(n.threshold) << ' ' << format_double(n.leaf_prob)
          << '\n';
    }
  }
  out << "end forest\n";
}

void write_segmenter(std::ostream &out, const StoredSegmenter &s) {
  out << "segmenter\n";
  out << "max_len " << s.max_len << '\n';
  out << "tags " << s.tags.size() << '\n';
  for (const auto &t : s.tags) out << t << '\n';
  out << "delta\n";
  for (Eigen::Index a = 0; a < s.delta.rows(); ++a) {
    for (Eigen::Index b = 0; b < s.delta.cols(); ++b) {
      if (b > 0) out << ' ';
      out << format_double(s.delta(a, b));
    }
    out << '\n';
  }
  out << "phrases " << s.phrases.size() << '\n';
  for (const auto &p : s.phrases) {
    out << format_double(p.theta) << '\t' << format_double(p.quality) << '\t' << p.text << '\n';
  }
  out << "end segmenter\n";
}

class LineReader {
 public:
  LineReader(std::istream &in, std::string name) : in_(in), name_(std::move(name)) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  bool next_if_any(std::string &line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  // Reads "<key> <value>" and returns value.
  std::string keyed(std::string_view key) {
    std::string line = next();
    if (line.rfind(std::string(key) + " ", 0) != 0) {
      fail("expected '" + std::string(key) + " ...'");
    }
    return line.substr(key.size() + 1);
  }

  std::size_t keyed_size(std::string_view key) { return to_size(keyed(key)); }

  std::size_t to_size(const std::string &s) {
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) fail("expected an integer: " + s);
    return v;
  }

  double to_double(std::string_view s) {
    try {
      return parse_double(s);
    } catch (const DataError &e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string &msg) { throw ParseError(name_, line_no_, msg); }

 private:
  std::istream &in_;
  std::string name_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> split_spaces(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

QualityModel read_forest(LineReader &r) {
  const std::size_t n_trees = r.keyed_size("trees");
  const std::size_t k = r.keyed_size("k_samples");
  const std::size_t seed = r.to_size(r.keyed("seed"));
  auto feat = split_spaces(r.keyed("features"));
  if (feat.empty() || r.to_size(feat[0]) != feat.size() - 1) r.fail("bad feature list");
  std::vector<std::string> names(feat.begin() + 1, feat.end());

  std::vector<DecisionTree> trees;
  trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    auto head = split_spaces(r.next());
    if (head.size() != 3 || head[0] != "tree" || r.to_size(head[1]) != t) r.fail("expected 'tree'");
    const std::size_t n_nodes = r.to_size(head[2]);
    std::vector<TreeNode> nodes(n_nodes);
    for (auto &node : nodes) {
      auto f = split_spaces(r.next());
      if (f.size() != 3) r.fail("bad tree node");
      int feature = 0;
      auto [end, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), feature);
      if (ec != std::errc() || end != f[0].data() + f[0].size()) r.fail("bad feature index");
      if (feature >= static_cast<int>(names.size())) r.fail("feature index out of range");
      node.feature = feature < 0 ? -1 : feature;
      node.threshold = r.to_double(f[1]);
      node.leaf_prob = r.to_double(f[2]);
    }
    try {
      trees.push_back(DecisionTree::from_preorder(std::move(nodes)));
    } catch (const DataError &e) {
      r.fail(e.what());
    }
  }
  if (r.next() != "end forest") r.fail("expected 'end forest'");
  return QualityModel(std::move(trees), k, seed, std::move(names));
}

StoredSegmenter read_segmenter(LineReader &r) {
  StoredSegmenter s;
  s.max_len = r.keyed_size("max_len");
  const std::size_t n_tags = r.keyed_size("tags");
  for (std::size_t i = 0; i < n_tags; ++i) s.tags.push_back(r.next());
  if (r.next() != "delta") r.fail("expected 'delta'");
  s.delta.resize(Eigen::Index(n_tags), Eigen::Index(n_tags));
  for (std::size_t a = 0; a < n_tags; ++a) {
    auto row = split_spaces(r.next());
    if (row.size() != n_tags) r.fail("delta row has wrong width");
    for (std::size_t b = 0; b < n_tags; ++b) s.delta(Eigen::Index(a), Eigen::Index(b)) = r.to_double(row[b]);
  }
  const std::size_t n_phrases = r.keyed_size("phrases");
  s.phrases.reserve(n_phrases);
  for (std::size_t i = 0; i < n_phrases; ++i) {
    std::string line = r.next();
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) r.fail("expected theta<TAB>quality<TAB>phrase");
    s.phrases.push_back({line.substr(t2 + 1), r.to_double(std::string_view(line).substr(0, t1)),
                         r.to_double(std::string_view(line).substr(t1 + 1, t2 - t1 - 1))});
  }
  if (r.next() != "end segmenter") r.fail("expected 'end segmenter'");
  return s;
}

}  // namespace

void write_model(std::ostream &out, const ModelFile &model) {
  out << kModelHeader << '\n';
  if (model.multiword) write_forest(out, "multiword", *model.multiword);
  if (model.unigram) write_forest(out, "unigram", *model.unigram);
  if (model.segmenter) write_segmenter(out, *model.segmenter);
}

ModelFile read_model(std::istream &in, const std::string &name) {
  LineReader r(in, name);
  if (r.next() != kModelHeader) r.fail("not a PHRASEKIT-QM v1 model file");
  ModelFile model;
  std::string line;
  while (r.next_if_any(line)) {
    if (line.empty()) continue;
    if (line == "forest multiword") {
      model.multiword = read_forest(r);
    } else if (line == "forest unigram") {
      model.unigram = read_forest(r);
    } else if (line == "segmenter") {
      model.segmenter = read_segmenter(r);
    } else {
      r.fail("unknown section: " + line);
    }
  }
  return model;
}

void save_model(const std::string &path, const ModelFile &model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  write_model(out, model);
}

ModelFile load_model(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  return read_model(in, path);
}

StoredSegmenter store_segmenter(const TaggedCorpus &corpus,
                                const std::vector<PhraseCandidate> &candidates,
                                const SegmenterParams &params) {
  StoredSegmenter s;
  s.max_len = params.max_len;
  s.tags = corpus.tagset().names();
  s.delta = params.delta.matrix();
  s.phrases.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    s.phrases.push_back({corpus.phrase_text(candidates[i].words),
                         i < params.theta.theta.size() ? params.theta.theta[i] : 0.0,
                         i < params.quality.size() ? params.quality[i] : 0.0});
  }
  return s;
}

BoundSegmenter bind_segmenter(const StoredSegmenter &stored, const TaggedCorpus &corpus) {
  BoundSegmenter out;
  out.params.max_len = stored.max_len;
  for (const auto &p : stored.phrases) {
    auto words = corpus.lookup_phrase(p.text);
    if (!words) continue;
    PhraseCandidate c;
    c.words = std::move(*words);
    c.quality = p.quality;
    out.params.theta.theta.push_back(p.theta);
    out.params.quality.push_back(p.quality);
    out.candidates.push_back(std::move(c));
  }
  out.trie = build_trie(out.candidates);

  const auto &tagset = corpus.tagset();
  out.params.delta = PosTransitionTable(tagset.size());
  std::vector<std::optional<Eigen::Index>> stored_index(tagset.size());
  for (std::size_t i = 0; i < stored.tags.size(); ++i) {
    if (auto id = tagset.find(stored.tags[i])) stored_index[*id] = Eigen::Index(i);
  }
  for (std::size_t a = 0; a < tagset.size(); ++a) {
    for (std::size_t b = 0; b < tagset.size(); ++b) {
      if (stored_index[a] && stored_index[b]) {
        out.params.delta(TagId(a), TagId(b)) = stored.delta(*stored_index[a], *stored_index[b]);
      }
    }
  }
  return out;
}

bool models_equal(const QualityModel &a, const QualityModel &b) {
  if (a.tree_count() != b.tree_count() || a.k_samples() != b.k_samples() ||
      a.seed() != b.seed() || a.feature_names() != b.feature_names()) {
    return false;
  }
  for (std::size_t t = 0; t < a.tree_count(); ++t) {
    const auto &x = a.trees()[t].nodes();
    const auto &y = b.trees()[t].nodes();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].feature != y[i].feature || x[i].threshold != y[i].threshold ||
          x[i].leaf_prob != y[i].leaf_prob || x[i].right != y[i].right) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace phrasekit

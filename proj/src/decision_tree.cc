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

#include "phrasekit/decision_tree.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "phrasekit/common.h"

namespace phrasekit {
namespace {

struct Sample {
  std::size_t row;
  std::uint8_t label;
};

double weighted_gini(double pos_l, double n_l, double pos_r, double n_r) {
  auto g = [](double pos, double n) {
    if (n == 0) return 0.0;
    double p = pos / n;
    return n * 2.0 * p * (1.0 - p);
  };
  return g(pos_l, n_l) + g(pos_r, n_r);
}

class Builder {
 public:
  Builder(const DecisionTree::Matrix &x, std::vector<TreeNode> &nodes) : x_(x), nodes_(nodes) {}

  void build(std::vector<Sample> samples) {
    const std::size_t n = samples.size();
    std::size_t pos = 0;
    for (const auto &s : samples) pos += s.label;

    const std::size_t self = nodes_.size();
    nodes_.push_back({});
    nodes_[self].leaf_prob = n == 0 ? 0.0 : double(pos) / double(n);
    if (pos == 0 || pos == n) return;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = 0.0;
    std::vector<Sample> sorted = samples;
    for (Eigen::Index f = 0; f < x_.cols(); ++f) {
      std::sort(sorted.begin(), sorted.end(), [&](const Sample &a, const Sample &b) {
        return x_(a.row, f) < x_(b.row, f);
      });
      double left_pos = 0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_pos += sorted[k].label;
        const double lo = x_(sorted[k].row, f);
        const double hi = x_(sorted[k + 1].row, f);
        if (!(lo < hi)) continue;
        const double left_n = double(k + 1);
        double score = weighted_gini(left_pos, left_n, double(pos) - left_pos, double(n) - left_n);
        if (best_feature < 0 || score < best_score) {
          best_feature = static_cast<int>(f);
          best_score = score;
          double mid = lo + (hi - lo) / 2.0;
          best_threshold = mid < hi ? mid : lo;
        }
      }
    }
    // All rows share one feature vector: conflicting duplicates stay a leaf.
    if (best_feature < 0) return;

    std::vector<Sample> left, right;
    for (const auto &s : samples) {
      (x_(s.row, best_feature) <= best_threshold ? left : right).push_back(s);
    }
    nodes_[self].feature = best_feature;
    nodes_[self].threshold = best_threshold;
    build(std::move(left));
    nodes_[self].right = static_cast<std::uint32_t>(nodes_.size());
    build(std::move(right));
  }

 private:
  const DecisionTree::Matrix &x_;
  std::vector<TreeNode> &nodes_;
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix &x, std::span<const std::size_t> rows,
                               std::span<const std::uint8_t> labels) {
  std::vector<Sample> samples(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) samples[i] = {rows[i], labels[i]};
  DecisionTree tree;
  Builder(x, tree.nodes_).build(std::move(samples));
  return tree;
}

DecisionTree DecisionTree::from_preorder(std::vector<TreeNode> nodes) {
  // Returns one past the last node of the subtree rooted at i.
  std::function<std::size_t(std::size_t)> link = [&](std::size_t i) -> std::size_t {
    if (i >= nodes.size()) throw DataError("truncated decision tree");
    if (nodes[i].is_leaf()) return i + 1;
    std::size_t right = link(i + 1);
    nodes[i].right = static_cast<std::uint32_t>(right);
    return link(right);
  };
  if (nodes.empty() || link(0) != nodes.size()) {
    throw DataError("malformed decision tree node list");
  }
  DecisionTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

std::size_t DecisionTree::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t i) -> std::size_t {
    if (nodes_[i].is_leaf()) return 0;
    return 1 + std::max(walk(i + 1), walk(nodes_[i].right));
  };
  return nodes_.empty() ? 0 : walk(0);
}

}  // namespace phrasekit

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
#include <span>
#include <vector>

#include <Eigen/Core>

namespace phrasekit {

// Node of a tree stored in preorder. Internal nodes send x[feature] <=
// threshold to the left child, which is always the next node; `right` is the
// index of the right child. Leaves have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  double leaf_prob = 0.0;  // positive fraction of the training rows in the leaf
  std::uint32_t right = 0;

  bool is_leaf() const { return feature < 0; }
};

// Unpruned binary classification tree. Splits are single-feature thresholds
// at midpoints between consecutive distinct values, chosen by weighted Gini
// impurity; growth stops only when a node is pure or all of its rows share
// one feature vector.
class DecisionTree {
 public:
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  DecisionTree() = default;

  // `rows` index into x (duplicates allowed); labels[i] is the label of
  // rows[i], 1 = positive.
  static DecisionTree fit(const Matrix &x, std::span<const std::size_t> rows,
                          std::span<const std::uint8_t> labels);

  // Rebuilds a tree from a preorder node list, recomputing child links.
  // Throws DataError if the list is not a complete preorder tree.
  static DecisionTree from_preorder(std::vector<TreeNode> nodes);

  template <class Row>
  double leaf_probability(const Row &x) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
      i = x(nodes_[i].feature) <= nodes_[i].threshold ? i + 1 : nodes_[i].right;
    }
    return nodes_[i].leaf_prob;
  }

  // Positive vote. A leaf with probability exactly 0.5 votes negative.
  template <class Row>
  bool predict(const Row &x) const {
    return leaf_probability(x) > 0.5;
  }

  const std::vector<TreeNode> &nodes() const { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace phrasekit

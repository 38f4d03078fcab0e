#pragma once

// Internal weighted CART builder shared by the decision-tree and boosted-stump
// trainers. Not installed.

#include <span>
#include <vector>

#include "evifuse/classifiers.hpp"

namespace evifuse::internal {

/// Grows an axis-aligned binary tree on standardized rows. `y` holds frame
/// indices in [0, n_classes); `w` holds per-row nonnegative weights. Splits
/// maximize impurity decrease; ties keep the lowest feature index and then the
/// lowest threshold. Leaves carry the weighted majority class (ties -> lowest
/// frame index).
std::vector<TreeNode> build_tree(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, const std::vector<double>& w,
                                 int n_classes, int max_depth, TreeCriterion criterion);

int tree_predict(const std::vector<TreeNode>& nodes, std::span<const double> row);

}  // namespace evifuse::internal

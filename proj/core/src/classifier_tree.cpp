#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "classifier_impl.hpp"
#include "tree_builder.hpp"

namespace evifuse::internal {
namespace {

double impurity(const std::vector<double>& counts, double total, TreeCriterion criterion) {
    if (total <= 0.0) return 0.0;
    double value = 0.0;
    if (criterion == TreeCriterion::gini) {
        value = 1.0;
        for (double c : counts) {
            const double p = c / total;
            value -= p * p;
        }
    } else {
        for (double c : counts) {
            if (c <= 0.0) continue;
            const double p = c / total;
            value -= p * std::log2(p);
        }
    }
    return value;
}

int weighted_majority(const std::vector<double>& counts) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(counts.size()); ++c)
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
    return best;
}

struct Builder {
    const std::vector<std::vector<double>>& x;
    const std::vector<int>& y;
    const std::vector<double>& w;
    int n_classes;
    int max_depth;
    TreeCriterion criterion;
    std::vector<TreeNode> nodes;

    std::vector<double> class_weights(const std::vector<std::size_t>& rows) const {
        std::vector<double> counts(static_cast<std::size_t>(n_classes), 0.0);
        for (std::size_t r : rows) counts[static_cast<std::size_t>(y[r])] += w[r];
        return counts;
    }

    int make_leaf(const std::vector<double>& counts) {
        TreeNode node;
        node.leaf_class = weighted_majority(counts);
        nodes.push_back(node);
        return static_cast<int>(nodes.size()) - 1;
    }

    // Returns the node index for `rows` at `depth`.
    int grow(const std::vector<std::size_t>& rows, int depth) {
        const std::vector<double> counts = class_weights(rows);
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const double node_impurity = impurity(counts, total, criterion);

        const bool pure = node_impurity <= 0.0;
        if (pure || depth >= max_depth || rows.size() < 2) return make_leaf(counts);

        // Exhaustive split search: features in ascending order, candidate
        // thresholds ascending, strictly-better acceptance. The first optimum
        // encountered therefore has the lowest feature index and threshold.
        const std::size_t d = x[rows.front()].size();
        double best_gain = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;

        std::vector<std::size_t> sorted = rows;
        std::vector<double> left_counts(static_cast<std::size_t>(n_classes));
        for (std::size_t f = 0; f < d; ++f) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                if (x[a][f] != x[b][f]) return x[a][f] < x[b][f];
                return a < b;
            });
            std::fill(left_counts.begin(), left_counts.end(), 0.0);
            double left_total = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const std::size_t r = sorted[i];
                left_counts[static_cast<std::size_t>(y[r])] += w[r];
                left_total += w[r];
                const double lo = x[r][f];
                const double hi = x[sorted[i + 1]][f];
                if (lo == hi) continue;  // no boundary between equal values

                std::vector<double> right_counts(counts);
                for (int c = 0; c < n_classes; ++c)
                    right_counts[static_cast<std::size_t>(c)] -=
                        left_counts[static_cast<std::size_t>(c)];
                const double right_total = total - left_total;
                const double child =
                    (left_total * impurity(left_counts, left_total, criterion) +
                     right_total * impurity(right_counts, right_total, criterion)) /
                    total;
                const double gain = node_impurity - child;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = lo + (hi - lo) / 2.0;
                }
            }
        }

        if (best_feature < 0) return make_leaf(counts);

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            if (x[r][static_cast<std::size_t>(best_feature)] <= best_threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        if (left_rows.empty() || right_rows.empty()) return make_leaf(counts);

        const int self = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(self)].feature = best_feature;
        nodes[static_cast<std::size_t>(self)].threshold = best_threshold;
        const int left = grow(left_rows, depth + 1);
        const int right = grow(right_rows, depth + 1);
        nodes[static_cast<std::size_t>(self)].left = left;
        nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }
};

}  // namespace

std::vector<TreeNode> build_tree(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, const std::vector<double>& w,
                                 int n_classes, int max_depth, TreeCriterion criterion) {
    Builder builder{x, y, w, n_classes, max_depth, criterion, {}};
    std::vector<std::size_t> rows(x.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    builder.grow(rows, 0);
    return std::move(builder.nodes);
}

int tree_predict(const std::vector<TreeNode>& nodes, std::span<const double> row) {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].leaf_class < 0) {
        const TreeNode& node = nodes[static_cast<std::size_t>(at)];
        at = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                          : node.right;
    }
    return nodes[static_cast<std::size_t>(at)].leaf_class;
}

TreeState fit_tree(const ClassifierSpec& spec, const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, int n_classes) {
    const std::vector<double> uniform(x.size(), 1.0);
    return TreeState{build_tree(x, y, uniform, n_classes, spec.max_depth, spec.criterion)};
}

int predict_tree(const TreeState& st, std::span<const double> row) {
    return tree_predict(st.nodes, row);
}

}  // namespace evifuse::internal

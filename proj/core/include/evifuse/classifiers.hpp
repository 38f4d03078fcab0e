#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "evifuse/dataset.hpp"
#include "evifuse/frame.hpp"

namespace evifuse {

enum class ClassifierKind { knn, decision_tree, gaussian_nb, ada_boost_stumps };
enum class KnnMetric { euclidean, manhattan };
enum class KnnWeighting { uniform, distance };
enum class TreeCriterion { gini, entropy };

/// Kind plus hyperparameters; fields outside the chosen kind are ignored.
struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::knn;

    // knn
    int n_neighbors = 7;
    KnnMetric metric = KnnMetric::euclidean;
    KnnWeighting weighting = KnnWeighting::uniform;

    // decision tree
    int max_depth = 10;
    TreeCriterion criterion = TreeCriterion::gini;

    // boosted stumps
    int n_estimators = 10;
    double learning_rate = 0.01;

    /// Short human-readable tag, e.g. "knn(k=7,manhattan,distance)".
    std::string describe() const;
};

/// Per-feature z-score transform fitted on training data only; constant
/// features keep their value (their spread is replaced by 1).
class Standardizer {
public:
    Standardizer() = default;
    static Standardizer fit(const std::vector<std::vector<double>>& rows);
    Standardizer(std::vector<double> mean, std::vector<double> stddev);

    std::vector<double> transform(std::span<const double> row) const;
    const std::vector<double>& mean() const noexcept { return mean_; }
    const std::vector<double>& stddev() const noexcept { return stddev_; }
    std::size_t width() const noexcept { return mean_.size(); }

private:
    std::vector<double> mean_;
    std::vector<double> stddev_;
};

// --- fitted states (public so persistence can reach them) -------------------

struct KnnState {
    std::vector<std::vector<double>> points;  // standardized training rows
    std::vector<int> point_classes;           // frame indices, one per row
};

struct TreeNode {
    int feature = -1;         // split feature, -1 for leaves
    double threshold = 0.0;   // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    int leaf_class = -1;      // frame index, set for leaves
};

struct TreeState {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct GaussianNbState {
    std::vector<double> log_prior;            // per frame index; -inf when unseen
    std::vector<std::vector<double>> mean;    // [class][feature]
    std::vector<std::vector<double>> var;     // [class][feature], smoothed
};

struct BoostState {
    struct Stage {
        TreeState stump;
        double alpha = 0.0;
    };
    std::vector<Stage> stages;
};

using FittedState = std::variant<KnnState, TreeState, GaussianNbState, BoostState>;

/// A trained base classifier: spec + frame + input standardizer + learned
/// parameters. Immutable; predictions are pure.
class ClassifierModel {
public:
    ClassifierModel(ClassifierSpec spec, FramePtr frame, Standardizer standardizer,
                    FittedState state);

    const ClassifierSpec& spec() const noexcept { return spec_; }
    const FramePtr& frame() const noexcept { return frame_; }
    const Standardizer& standardizer() const noexcept { return standardizer_; }
    const FittedState& state() const noexcept { return state_; }

    /// @throws DimensionMismatchError when the row width differs from training
    int predict(std::span<const double> features) const;
    std::vector<int> predict_all(const Dataset& ds) const;

private:
    ClassifierSpec spec_;
    FramePtr frame_;
    Standardizer standardizer_;
    FittedState state_;
};

/// Deterministic fit of `spec` on `train`; all labels must be frame members.
/// @throws EmptyTrainingSetError, UnknownLabelError, std::invalid_argument
ClassifierModel train(const ClassifierSpec& spec, const Dataset& train, FramePtr frame);

struct GridSearchResult {
    ClassifierSpec best;
    double best_macro_f1 = 0.0;
    std::vector<std::string> warnings;  // specs skipped because training failed
};

/// Exhaustive search maximizing validation macro-F1; ties keep the earliest
/// grid entry. Specs whose training throws are skipped with a warning.
/// @throws EmptyGridError
GridSearchResult grid_search(std::span<const ClassifierSpec> grid, const Dataset& train_set,
                             const Dataset& val_set, const FramePtr& frame);

}  // namespace evifuse

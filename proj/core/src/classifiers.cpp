#include <cstdio>
#include <stdexcept>
#include <utility>

#include "classifier_impl.hpp"
#include "evifuse/classifiers.hpp"
#include "evifuse/errors.hpp"
#include "evifuse/metrics.hpp"

namespace evifuse {
namespace {

const char* metric_name(KnnMetric m) {
    return m == KnnMetric::euclidean ? "euclidean" : "manhattan";
}
const char* weighting_name(KnnWeighting w) {
    return w == KnnWeighting::uniform ? "uniform" : "distance";
}
const char* criterion_name(TreeCriterion c) {
    return c == TreeCriterion::gini ? "gini" : "entropy";
}

void validate_spec(const ClassifierSpec& spec) {
    switch (spec.kind) {
        case ClassifierKind::knn:
            if (spec.n_neighbors < 1)
                throw std::invalid_argument("n_neighbors must be at least 1");
            break;
        case ClassifierKind::decision_tree:
            if (spec.max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
            break;
        case ClassifierKind::gaussian_nb:
            break;
        case ClassifierKind::ada_boost_stumps:
            if (spec.n_estimators < 1)
                throw std::invalid_argument("n_estimators must be at least 1");
            if (!(spec.learning_rate > 0.0))
                throw std::invalid_argument("learning_rate must be positive");
            break;
    }
}

}  // namespace

std::string ClassifierSpec::describe() const {
    char buf[96];
    switch (kind) {
        case ClassifierKind::knn:
            std::snprintf(buf, sizeof buf, "knn(k=%d,%s,%s)", n_neighbors, metric_name(metric),
                          weighting_name(weighting));
            break;
        case ClassifierKind::decision_tree:
            std::snprintf(buf, sizeof buf, "decision_tree(max_depth=%d,%s)", max_depth,
                          criterion_name(criterion));
            break;
        case ClassifierKind::gaussian_nb:
            std::snprintf(buf, sizeof buf, "gaussian_nb");
            break;
        case ClassifierKind::ada_boost_stumps:
            std::snprintf(buf, sizeof buf, "ada_boost_stumps(n=%d,lr=%g,%s)", n_estimators,
                          learning_rate, criterion_name(criterion));
            break;
    }
    return buf;
}

ClassifierModel::ClassifierModel(ClassifierSpec spec, FramePtr frame, Standardizer standardizer,
                                 FittedState state)
    : spec_(spec),
      frame_(std::move(frame)),
      standardizer_(std::move(standardizer)),
      state_(std::move(state)) {
    validate_spec(spec_);
    if (!frame_) throw std::invalid_argument("classifier model requires a frame");
}

int ClassifierModel::predict(std::span<const double> features) const {
    const std::vector<double> z = standardizer_.transform(features);
    const int n_classes = static_cast<int>(frame_->size());
    int cls = 0;
    if (const auto* knn = std::get_if<KnnState>(&state_)) {
        cls = internal::predict_knn(spec_, *knn, z, n_classes);
    } else if (const auto* tree = std::get_if<TreeState>(&state_)) {
        cls = internal::predict_tree(*tree, z);
    } else if (const auto* nb = std::get_if<GaussianNbState>(&state_)) {
        cls = internal::predict_gaussian_nb(*nb, z);
    } else {
        cls = internal::predict_boost(std::get<BoostState>(state_), z, n_classes);
    }
    return frame_->labels()[static_cast<std::size_t>(cls)];
}

std::vector<int> ClassifierModel::predict_all(const Dataset& ds) const {
    std::vector<int> out;
    out.reserve(ds.rows());
    for (const auto& row : ds.features) out.push_back(predict(row));
    return out;
}

ClassifierModel train(const ClassifierSpec& spec, const Dataset& train_set, FramePtr frame) {
    validate_spec(spec);
    if (!frame) throw std::invalid_argument("training requires a frame");
    if (train_set.rows() == 0)
        throw EmptyTrainingSetError("cannot train " + spec.describe() + " on zero rows");

    std::vector<int> classes;
    classes.reserve(train_set.rows());
    for (int label : train_set.labels) {
        if (!frame->contains(label))
            throw UnknownLabelError("training label " + std::to_string(label) +
                                    " is not in the frame");
        classes.push_back(static_cast<int>(frame->index_of(label)));
    }

    Standardizer standardizer = Standardizer::fit(train_set.features);
    std::vector<std::vector<double>> z;
    z.reserve(train_set.rows());
    for (const auto& row : train_set.features) z.push_back(standardizer.transform(row));

    const int n_classes = static_cast<int>(frame->size());
    FittedState state;
    switch (spec.kind) {
        case ClassifierKind::knn:
            state = internal::fit_knn(spec, std::move(z), std::move(classes));
            break;
        case ClassifierKind::decision_tree:
            state = internal::fit_tree(spec, z, classes, n_classes);
            break;
        case ClassifierKind::gaussian_nb:
            state = internal::fit_gaussian_nb(z, classes, n_classes);
            break;
        case ClassifierKind::ada_boost_stumps:
            state = internal::fit_boost(spec, z, classes, n_classes);
            break;
    }
    return ClassifierModel(spec, std::move(frame), std::move(standardizer), std::move(state));
}

GridSearchResult grid_search(std::span<const ClassifierSpec> grid, const Dataset& train_set,
                             const Dataset& val_set, const FramePtr& frame) {
    if (grid.empty()) throw EmptyGridError("hyperparameter grid is empty");

    GridSearchResult result;
    bool found = false;
    for (const ClassifierSpec& spec : grid) {
        double f1 = 0.0;
        try {
            const ClassifierModel model = train(spec, train_set, frame);
            f1 = compute_metrics(val_set.labels, model.predict_all(val_set), *frame).macro_f1;
        } catch (const std::exception& ex) {
            result.warnings.push_back(spec.describe() + ": " + ex.what());
            continue;
        }
        if (!found || f1 > result.best_macro_f1) {
            found = true;
            result.best = spec;
            result.best_macro_f1 = f1;
        }
    }
    if (!found)
        throw EmptyGridError("every grid entry failed to train: " +
                             std::to_string(result.warnings.size()) + " warnings");
    return result;
}

}  // namespace evifuse

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace evifuse {

/// In-memory tabular dataset: one feature row per observation plus an integer
/// class label. Values are immutable by convention once loaded/generated.
struct Dataset {
    std::vector<std::vector<double>> features;  // rows x columns
    std::vector<int> labels;                    // one per row
    std::vector<std::string> feature_names;     // empty when the source had none

    std::size_t rows() const noexcept { return features.size(); }
    std::size_t cols() const noexcept { return features.empty() ? 0 : features.front().size(); }
};

struct SplitSpec {
    double train_fraction = 0.6;
    double val_fraction = 0.2;  // remainder is test
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct SplitResult {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Reads a comma-separated file with a header row; every non-label cell must
/// parse as a finite real, the label cells as integers.
/// @throws FileNotFoundError, ParseError (with row/column), MissingLabelColumnError
Dataset load_csv(const std::string& path, const std::string& label_column = "label");

/// Deterministic three-way split. Stratified mode shuffles and cuts within
/// each class so per-class proportions are honored within one row.
/// @throws ClassTooSmallError when a stratified class has fewer than 3 rows
SplitResult split(const Dataset& ds, const SplitSpec& spec);

/// Rows of `a` followed by rows of `b`.
/// @throws FeatureMismatchError when both are non-empty with different widths
Dataset concat(const Dataset& a, const Dataset& b);

/// Applies `mapping` to every label; labels absent from the map pass through.
Dataset relabel(const Dataset& ds, const std::map<int, int>& mapping);

/// Rows whose label passes the keep-predicate, in original order.
Dataset filter_labels(const Dataset& ds, const std::vector<int>& keep);

/// Gaussian clusters with unit variance, one per class, labeled 0..n-1 in
/// row-block order. Class centers sit at mutual distance
/// separation * sqrt(n_features), so `separation` is measured in
/// per-feature noise units. Fully deterministic for a fixed seed.
Dataset synth_clusters(int n_classes, int n_features, int n_per_class, double separation,
                       std::uint64_t seed);

}  // namespace evifuse

#pragma once

// Internal per-kind fit/predict entry points used by the ClassifierModel
// dispatch in classifiers.cpp. All rows are already standardized and all
// labels are frame indices in [0, n_classes). Not installed.

#include <span>
#include <vector>

#include "evifuse/classifiers.hpp"

namespace evifuse::internal {

KnnState fit_knn(const ClassifierSpec& spec, std::vector<std::vector<double>> x,
                 std::vector<int> y);
int predict_knn(const ClassifierSpec& spec, const KnnState& st, std::span<const double> row,
                int n_classes);

TreeState fit_tree(const ClassifierSpec& spec, const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, int n_classes);
int predict_tree(const TreeState& st, std::span<const double> row);

GaussianNbState fit_gaussian_nb(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, int n_classes);
int predict_gaussian_nb(const GaussianNbState& st, std::span<const double> row);

BoostState fit_boost(const ClassifierSpec& spec, const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, int n_classes);
int predict_boost(const BoostState& st, std::span<const double> row, int n_classes);

}  // namespace evifuse::internal

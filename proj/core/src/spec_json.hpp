#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "evifuse/classifiers.hpp"
#include "evifuse/errors.hpp"
#include "json.hpp"

namespace evifuse::detail {

inline const char* to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::decision_tree: return "decision_tree";
        case ClassifierKind::gaussian_nb: return "gaussian_nb";
        case ClassifierKind::ada_boost_stumps: return "ada_boost_stumps";
    }
    return "?";
}
inline const char* to_string(KnnMetric m) {
    return m == KnnMetric::euclidean ? "euclidean" : "manhattan";
}
inline const char* to_string(KnnWeighting w) {
    return w == KnnWeighting::uniform ? "uniform" : "distance";
}
inline const char* to_string(TreeCriterion c) {
    return c == TreeCriterion::gini ? "gini" : "entropy";
}

template <typename Enum>
Enum enum_from(const std::string& text, std::initializer_list<std::pair<const char*, Enum>> table,
               const char* field) {
    for (const auto& [name, value] : table)
        if (text == name) return value;
    throw ParseError("unknown " + std::string(field) + " '" + text + "'");
}

inline nlohmann::json spec_to_json(const ClassifierSpec& spec) {
    return {{"kind", to_string(spec.kind)},
            {"n_neighbors", spec.n_neighbors},
            {"metric", to_string(spec.metric)},
            {"weighting", to_string(spec.weighting)},
            {"max_depth", spec.max_depth},
            {"criterion", to_string(spec.criterion)},
            {"n_estimators", spec.n_estimators},
            {"learning_rate", spec.learning_rate}};
}

/// Strict mode (model files) requires every field; lenient mode (experiment
/// configs) falls back to the spec defaults for omitted ones.
inline ClassifierSpec spec_from_json(const nlohmann::json& j, bool strict = true) {
    ClassifierSpec spec;
    const auto text = [&](const char* key, const char* fallback) -> std::string {
        if (strict || j.contains(key)) return j.at(key).get<std::string>();
        return fallback;
    };
    const auto number = [&](const char* key, auto fallback) {
        if (strict || j.contains(key)) return j.at(key).get<decltype(fallback)>();
        return fallback;
    };
    spec.kind = enum_from<ClassifierKind>(j.at("kind").get<std::string>(),
                                          {{"knn", ClassifierKind::knn},
                                           {"decision_tree", ClassifierKind::decision_tree},
                                           {"gaussian_nb", ClassifierKind::gaussian_nb},
                                           {"ada_boost_stumps", ClassifierKind::ada_boost_stumps}},
                                          "kind");
    spec.n_neighbors = number("n_neighbors", spec.n_neighbors);
    spec.metric = enum_from<KnnMetric>(
        text("metric", to_string(spec.metric)),
        {{"euclidean", KnnMetric::euclidean}, {"manhattan", KnnMetric::manhattan}}, "metric");
    spec.weighting = enum_from<KnnWeighting>(
        text("weighting", to_string(spec.weighting)),
        {{"uniform", KnnWeighting::uniform}, {"distance", KnnWeighting::distance}}, "weighting");
    spec.max_depth = number("max_depth", spec.max_depth);
    spec.criterion = enum_from<TreeCriterion>(
        text("criterion", to_string(spec.criterion)),
        {{"gini", TreeCriterion::gini}, {"entropy", TreeCriterion::entropy}}, "criterion");
    spec.n_estimators = number("n_estimators", spec.n_estimators);
    spec.learning_rate = number("learning_rate", spec.learning_rate);
    return spec;
}

}  // namespace evifuse::detail

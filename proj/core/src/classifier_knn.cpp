#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "classifier_impl.hpp"

namespace evifuse::internal {
namespace {

double distance(const ClassifierSpec& spec, std::span<const double> a,
                std::span<const double> b) {
    double acc = 0.0;
    if (spec.metric == KnnMetric::euclidean) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double d = a[j] - b[j];
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    for (std::size_t j = 0; j < a.size(); ++j) acc += std::abs(a[j] - b[j]);
    return acc;
}

}  // namespace

KnnState fit_knn(const ClassifierSpec&, std::vector<std::vector<double>> x,
                 std::vector<int> y) {
    return KnnState{std::move(x), std::move(y)};
}

int predict_knn(const ClassifierSpec& spec, const KnnState& st, std::span<const double> row,
                int n_classes) {
    const std::size_t n = st.points.size();
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(spec.n_neighbors), n);

    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = {distance(spec, st.points[i], row), i};
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());

    std::vector<double> votes(static_cast<std::size_t>(n_classes), 0.0);
    bool exact_hit = false;
    for (std::size_t i = 0; i < k; ++i)
        if (order[i].first == 0.0) exact_hit = true;

    for (std::size_t i = 0; i < k; ++i) {
        const auto [dist, idx] = order[i];
        double w = 1.0;
        if (exact_hit) {
            // An exact duplicate of the query decides alone, regardless of the
            // weighting mode: at distance zero its inverse-distance weight
            // dominates every other neighbor.
            if (dist != 0.0) continue;
        } else if (spec.weighting == KnnWeighting::distance) {
            w = 1.0 / dist;
        }
        votes[static_cast<std::size_t>(st.point_classes[idx])] += w;
    }

    int best = 0;
    for (int c = 1; c < n_classes; ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    return best;
}

}  // namespace evifuse::internal

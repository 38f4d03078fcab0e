#include <cmath>
#include <cstddef>
#include <vector>

#include "classifier_impl.hpp"
#include "tree_builder.hpp"

namespace evifuse::internal {

// Stagewise additive boosting of depth-1 trees with the multiclass exponential
// reweighting scheme: alpha_t = lr * (ln((1 - err_t) / err_t) + ln(K - 1)).
BoostState fit_boost(const ClassifierSpec& spec, const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, int n_classes) {
    const std::size_t n = x.size();
    const double chance_error = 1.0 - 1.0 / static_cast<double>(n_classes);

    BoostState st;
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (int t = 0; t < spec.n_estimators; ++t) {
        std::vector<TreeNode> stump = build_tree(x, y, w, n_classes, 1, spec.criterion);

        double err = 0.0;
        std::vector<char> miss(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (tree_predict(stump, x[i]) != y[i]) {
                miss[i] = 1;
                err += w[i];
            }
        }

        if (err <= 0.0) {
            // Perfect stage: it alone decides, and reweighting is undefined.
            st.stages.push_back({TreeState{std::move(stump)}, 1.0});
            break;
        }
        if (err >= chance_error) {
            // No better than chance: stop boosting. Keep the stump only when
            // it is all we have, as a plain majority fallback.
            if (st.stages.empty()) st.stages.push_back({TreeState{std::move(stump)}, 1.0});
            break;
        }

        // err in (0, chance_error) makes alpha strictly positive.
        const double alpha = spec.learning_rate *
                             (std::log((1.0 - err) / err) +
                              std::log(static_cast<double>(n_classes) - 1.0));
        st.stages.push_back({TreeState{std::move(stump)}, alpha});

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (miss[i]) w[i] *= std::exp(alpha);
            total += w[i];
        }
        for (double& wi : w) wi /= total;
    }
    return st;
}

int predict_boost(const BoostState& st, std::span<const double> row, int n_classes) {
    std::vector<double> votes(static_cast<std::size_t>(n_classes), 0.0);
    for (const auto& stage : st.stages)
        votes[static_cast<std::size_t>(tree_predict(stage.stump.nodes, row))] += stage.alpha;
    int best = 0;
    for (int c = 1; c < n_classes; ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    return best;
}

}  // namespace evifuse::internal

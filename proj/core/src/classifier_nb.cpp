#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "classifier_impl.hpp"

namespace evifuse::internal {

namespace {
// Added to every per-class variance so zero-spread features stay finite.
constexpr double kVarianceSmoothing = 1e-9;
}

GaussianNbState fit_gaussian_nb(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, int n_classes) {
    const std::size_t d = x.front().size();
    const std::size_t k = static_cast<std::size_t>(n_classes);
    GaussianNbState st;
    st.log_prior.assign(k, -std::numeric_limits<double>::infinity());
    st.mean.assign(k, std::vector<double>(d, 0.0));
    st.var.assign(k, std::vector<double>(d, kVarianceSmoothing));

    std::vector<std::size_t> counts(k, 0);
    for (int label : y) ++counts[static_cast<std::size_t>(label)];

    for (std::size_t i = 0; i < x.size(); ++i) {
        auto& mean = st.mean[static_cast<std::size_t>(y[i])];
        for (std::size_t j = 0; j < d; ++j) mean[j] += x[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        for (double& m : st.mean[c]) m /= static_cast<double>(counts[c]);
        st.log_prior[c] =
            std::log(static_cast<double>(counts[c]) / static_cast<double>(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const double delta = x[i][j] - st.mean[c][j];
            st.var[c][j] += delta * delta / static_cast<double>(counts[c]);
        }
    }
    return st;
}

int predict_gaussian_nb(const GaussianNbState& st, std::span<const double> row) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < st.log_prior.size(); ++c) {
        if (std::isinf(st.log_prior[c])) continue;  // class absent from training
        double score = st.log_prior[c];
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double var = st.var[c][j];
            const double delta = row[j] - st.mean[c][j];
            score -= 0.5 * std::log(2.0 * std::numbers::pi * var) + delta * delta / (2.0 * var);
        }
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(c);
        }
    }
    return best;
}

}  // namespace evifuse::internal

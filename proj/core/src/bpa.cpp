#include "evifuse/bpa.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "evifuse/errors.hpp"

namespace evifuse {

SensitivityFactor k_factor(int f) {
    if (f < 2) {
        throw SensitivityTooSmallError("sensitivity exponent must be >= 2, got " +
                                       std::to_string(f));
    }
    return SensitivityFactor{f, 1.0 - std::pow(10.0, -f)};
}

ConfidenceWeights::ConfidenceWeights(FramePtr frame, std::vector<double> weights)
    : frame_(std::move(frame)), weights_(std::move(weights)) {
    if (weights_.size() != frame_->size()) {
        throw InvalidWeightError("weight vector length " + std::to_string(weights_.size()) +
                                 " does not match frame size " + std::to_string(frame_->size()));
    }
    for (double w : weights_) {
        if (w < 0.0 || w > 1.0) {
            throw InvalidWeightError("confidence weight " + std::to_string(w) +
                                     " outside [0,1]");
        }
    }
}

ConfidenceWeights ConfidenceWeights::uniform(FramePtr frame, double weight) {
    std::vector<double> w(frame->size(), weight);
    return ConfidenceWeights(std::move(frame), std::move(w));
}

MassFunction prediction_to_mass(int predicted_label, const ConfidenceWeights& weights,
                                const SensitivityFactor& k) {
    const auto& frame = weights.frame();
    const std::size_t active = frame->index_of(predicted_label);
    const std::size_t n = frame->size();
    const double residual = (1.0 - k.k) / static_cast<double>(n - 1);

    std::vector<double> singletons(n);
    double weighted_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double raw = j == active ? k.k : residual;
        singletons[j] = raw * weights.at(j);
        weighted_sum += singletons[j];
    }
    // With full weights the shortfall is 0 up to rounding of (1-k)/(N-1);
    // clamp the sub-epsilon residue so the mass invariants hold exactly.
    double theta = 1.0 - weighted_sum;
    if (theta < 0.0 && theta > -1e-12) theta = 0.0;
    return MassFunction(frame, std::move(singletons), theta);
}

}  // namespace evifuse

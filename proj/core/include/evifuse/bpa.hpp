#pragma once

#include <vector>

#include "evifuse/frame.hpp"
#include "evifuse/mass.hpp"

namespace evifuse {

/// The "sensitivity to zero" factor k = 1 - 10^-F. It is the share of raw
/// mass a source puts on its predicted class; the residual (1-k) is spread
/// over the other classes so no singleton mass is ever exactly zero and
/// Dempster fusion can never divide by zero.
struct SensitivityFactor {
    int f;
    double k;
};

/// @throws SensitivityTooSmallError if f < 2
SensitivityFactor k_factor(int f);

inline constexpr int kDefaultSensitivityExponent = 4;  // k = 0.9999

/// Per-class confidence weights of one evidence source, in [0,1]. Weight 1
/// means full trust in that class's votes; lower weights shift mass from the
/// class to the frame (more uncertainty).
class ConfidenceWeights {
public:
    /// @throws InvalidWeightError if any weight is outside [0,1] or the
    ///         vector length does not match the frame
    ConfidenceWeights(FramePtr frame, std::vector<double> weights);

    /// The common case: the same weight for every class (default 1).
    static ConfidenceWeights uniform(FramePtr frame, double weight = 1.0);

    const FramePtr& frame() const noexcept { return frame_; }
    const std::vector<double>& values() const noexcept { return weights_; }
    double at(std::size_t index) const { return weights_.at(index); }

private:
    FramePtr frame_;
    std::vector<double> weights_;
};

/// Turns a crisp prediction into evidence: raw vector m' puts k on the
/// predicted class and (1-k)/(N-1) on every other class; each entry is then
/// scaled by its class weight and the shortfall from 1 becomes the frame
/// mass (the uncertainty U).
/// @throws LabelNotInFrameError
MassFunction prediction_to_mass(int predicted_label, const ConfidenceWeights& weights,
                                const SensitivityFactor& k);

/// The uncertainty of a mass function: its frame mass.
inline double uncertainty_of(const MassFunction& m) noexcept { return m.theta(); }

}  // namespace evifuse

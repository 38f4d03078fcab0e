#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "evifuse/bpa.hpp"
#include "evifuse/classifiers.hpp"
#include "evifuse/dataset.hpp"
#include "evifuse/frame.hpp"
#include "evifuse/mass.hpp"

namespace evifuse {

/// A fixed, ordered pool of trained base classifiers fused at decision level.
/// Member order matters: it is the fold order of the combination and part of
/// the model identity.
struct EnsembleClassifier {
    std::vector<ClassifierModel> members;        // >= 2, all on `frame`
    FramePtr frame;
    std::vector<ConfidenceWeights> weights;      // one per member
    SensitivityFactor k;
};

/// Validates and assembles an ensemble from already-trained members.
/// @throws EmptyListError (< 2 members), FrameMismatchError, InvalidWeightError
EnsembleClassifier make_ensemble(std::vector<ClassifierModel> members,
                                 std::vector<ConfidenceWeights> weights, SensitivityFactor k);

/// Trains one member per spec on `train_set` and assembles the ensemble with
/// the same per-class confidence `member_weight` for every member.
EnsembleClassifier train_ensemble(std::span<const ClassifierSpec> specs, const Dataset& train_set,
                                  FramePtr frame, double member_weight, SensitivityFactor k);

/// One fused decision over the member votes for a single observation.
struct EnsembleVerdict {
    int y_ec = 0;                        // argmax of the Dempster-fused mass
    double u_d = 0.0;                    // frame mass of the Dempster fold
    double u_y = 0.0;                    // frame mass of the Yager fold
    std::vector<int> member_predictions;
    MassFunction fused_mass;             // Dempster fold (decision mass)
    MassFunction fused_mass_yager;       // Yager fold (uncertainty monitor)
    double conflict_dempster = 0.0;      // last-step conflict of each fold
    double conflict_yager = 0.0;
};

/// Fuses already-made member predictions: each vote becomes evidence via
/// prediction_to_mass, then both rules fold the same masses left to right.
/// The decision label and u_d come from the Dempster fold, u_y from Yager.
/// @throws LengthMismatchError when predictions/weights disagree in count
EnsembleVerdict fuse_predictions(std::span<const int> predictions,
                                 std::span<const ConfidenceWeights> weights,
                                 const SensitivityFactor& k, const FramePtr& frame);

/// Runs every member on the observation and fuses the votes.
/// @throws DimensionMismatchError
EnsembleVerdict ec_infer(const EnsembleClassifier& ec, std::span<const double> observation);

enum class WindowMode {
    majority,      // most frequent label in the buffer, ties to the newest
    literal_mean,  // arithmetic mean of the buffer snapped to the nearest
                   // frame label, ties to the smaller label
};

/// Sliding smoother over the last N_w+1 ensemble labels.
class PredictionWindow {
public:
    PredictionWindow(std::size_t n_w, WindowMode mode, FramePtr frame);

    /// Appends a label (evicting the oldest beyond N_w+1) and returns the
    /// smoothed label for the current position.
    int push(int label);

    std::size_t capacity() const noexcept { return n_w_; }
    const std::deque<int>& buffer() const noexcept { return buffer_; }

private:
    std::size_t n_w_;
    WindowMode mode_;
    FramePtr frame_;
    std::deque<int> buffer_;
};

struct StreamResult {
    std::vector<EnsembleVerdict> verdicts;  // one per row, in order
    std::vector<int> smoothed_labels;       // windowed decision per row
};

/// Row-by-row inference threading one PredictionWindow through the stream.
StreamResult ec_infer_stream(const EnsembleClassifier& ec, const Dataset& observations,
                             std::size_t n_w, WindowMode mode = WindowMode::majority);

}  // namespace evifuse

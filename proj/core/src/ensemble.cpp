#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "evifuse/ensemble.hpp"
#include "evifuse/errors.hpp"

namespace evifuse {

EnsembleClassifier make_ensemble(std::vector<ClassifierModel> members,
                                 std::vector<ConfidenceWeights> weights, SensitivityFactor k) {
    if (members.size() < 2)
        throw EmptyListError("an ensemble needs at least 2 members, got " +
                             std::to_string(members.size()));
    if (weights.size() != members.size())
        throw LengthMismatchError("expected one weight vector per member");
    const FramePtr frame = members.front().frame();
    for (const ClassifierModel& m : members)
        if (!same_frame(m.frame(), frame))
            throw FrameMismatchError("ensemble members disagree on the frame");
    for (const ConfidenceWeights& w : weights)
        if (!same_frame(w.frame(), frame))
            throw FrameMismatchError("weight vector frame differs from the members'");
    return EnsembleClassifier{std::move(members), frame, std::move(weights), k};
}

EnsembleClassifier train_ensemble(std::span<const ClassifierSpec> specs, const Dataset& train_set,
                                  FramePtr frame, double member_weight, SensitivityFactor k) {
    std::vector<ClassifierModel> members;
    members.reserve(specs.size());
    for (const ClassifierSpec& spec : specs) members.push_back(train(spec, train_set, frame));
    std::vector<ConfidenceWeights> weights(members.size(),
                                           ConfidenceWeights::uniform(frame, member_weight));
    return make_ensemble(std::move(members), std::move(weights), k);
}

EnsembleVerdict fuse_predictions(std::span<const int> predictions,
                                 std::span<const ConfidenceWeights> weights,
                                 const SensitivityFactor& k, const FramePtr& frame) {
    if (predictions.size() != weights.size())
        throw LengthMismatchError("one confidence-weight vector per prediction required");
    if (predictions.empty()) throw EmptyListError("no member predictions to fuse");

    std::vector<MassFunction> masses;
    masses.reserve(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i)
        masses.push_back(prediction_to_mass(predictions[i], weights[i], k));

    // Both rules run over the same member masses. Total conflict cannot occur:
    // the sensitivity factor keeps every weighted singleton mass positive (or
    // the mass vacuous), so the Dempster denominator stays > 0.
    const FusionResult dempster = combine_many(masses, CombinationRule::dempster);
    const FusionResult yager = combine_many(masses, CombinationRule::yager);

    EnsembleVerdict verdict{dempster.fused.argmax_label(),
                            dempster.fused.theta(),
                            yager.fused.theta(),
                            std::vector<int>(predictions.begin(), predictions.end()),
                            dempster.fused,
                            yager.fused,
                            dempster.conflict,
                            yager.conflict};
    assert(verdict.u_d >= 0.0 && verdict.u_d <= 1.0 + 1e-12);
    assert(verdict.u_y >= 0.0 && verdict.u_y <= 1.0 + 1e-12);
    return verdict;
}

EnsembleVerdict ec_infer(const EnsembleClassifier& ec, std::span<const double> observation) {
    std::vector<int> predictions;
    predictions.reserve(ec.members.size());
    for (const ClassifierModel& member : ec.members)
        predictions.push_back(member.predict(observation));
    return fuse_predictions(predictions, ec.weights, ec.k, ec.frame);
}

PredictionWindow::PredictionWindow(std::size_t n_w, WindowMode mode, FramePtr frame)
    : n_w_(n_w), mode_(mode), frame_(std::move(frame)) {
    if (!frame_) throw std::invalid_argument("prediction window requires a frame");
}

int PredictionWindow::push(int label) {
    buffer_.push_back(label);
    if (buffer_.size() > n_w_ + 1) buffer_.pop_front();

    if (mode_ == WindowMode::majority) {
        // Most frequent buffered label; on ties the most recently pushed of
        // the tied labels wins, so a fresh regime change is not outvoted by
        // an equally-sized stale remnant.
        int best = label;
        std::size_t best_count = 0;
        for (auto it = buffer_.rbegin(); it != buffer_.rend(); ++it) {
            std::size_t count = 0;
            for (int other : buffer_)
                if (other == *it) ++count;
            if (count > best_count) {
                best_count = count;
                best = *it;
            }
        }
        return best;
    }

    double mean = 0.0;
    for (int v : buffer_) mean += v;
    mean /= static_cast<double>(buffer_.size());
    // Snap to the nearest frame label; equidistant ties go to the smaller.
    int best = frame_->labels().front();
    double best_gap = std::abs(mean - best);
    for (int candidate : frame_->labels()) {
        const double gap = std::abs(mean - candidate);
        if (gap < best_gap || (gap == best_gap && candidate < best)) {
            best_gap = gap;
            best = candidate;
        }
    }
    return best;
}

StreamResult ec_infer_stream(const EnsembleClassifier& ec, const Dataset& observations,
                             std::size_t n_w, WindowMode mode) {
    StreamResult out;
    out.verdicts.reserve(observations.rows());
    out.smoothed_labels.reserve(observations.rows());
    PredictionWindow window(n_w, mode, ec.frame);
    for (const auto& row : observations.features) {
        out.verdicts.push_back(ec_infer(ec, row));
        out.smoothed_labels.push_back(window.push(out.verdicts.back().y_ec));
    }
    return out;
}

}  // namespace evifuse

#include "evifuse/mass.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "evifuse/errors.hpp"

namespace evifuse {

namespace {

constexpr double kSumTolerance = 1e-9;

void require_same_frame(const MassFunction& m1, const MassFunction& m2) {
    if (!same_frame(m1.frame(), m2.frame())) {
        throw FrameMismatchError("mass functions live on different frames");
    }
}

struct RawProducts {
    std::vector<double> singletons;  // intersection mass per singleton
    double theta = 0.0;              // product of the two frame masses
    double conflict = 0.0;           // product mass on empty intersections
};

// Intersection table for the singletons+frame family:
//   singleton_i x singleton_i -> singleton_i
//   singleton_i x singleton_j -> empty (i != j)
//   singleton_i x frame       -> singleton_i
//   frame       x frame       -> frame
RawProducts pairwise_products(const MassFunction& m1, const MassFunction& m2) {
    const std::size_t n = m1.frame()->size();
    const auto& s1 = m1.singletons();
    const auto& s2 = m2.singletons();

    RawProducts out;
    out.singletons.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.singletons[i] = s1[i] * s2[i] + s1[i] * m2.theta() + m1.theta() * s2[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) out.conflict += s1[i] * s2[j];
        }
    }
    out.theta = m1.theta() * m2.theta();
    return out;
}

// The true component sum of every combination result is exactly 1, but the
// numerator path and the denominator path accumulate float error separately;
// across deep folds of near-certain masses the drift can breach the
// constructor tolerance. Rescaling by the actual sum is a mathematical no-op
// that pins the invariant at machine precision.
MassFunction exactly_normalized(FramePtr frame, std::vector<double> singletons, double theta) {
    double total = theta;
    for (double v : singletons) total += v;
    for (double& v : singletons) v /= total;
    return MassFunction(std::move(frame), std::move(singletons), theta / total);
}

}  // namespace

MassFunction::MassFunction(FramePtr frame, std::vector<double> singletons, double theta)
    : frame_(std::move(frame)), singletons_(std::move(singletons)), theta_(theta) {
    if (singletons_.size() != frame_->size()) {
        throw InvalidMassError("mass vector length " + std::to_string(singletons_.size()) +
                               " does not match frame size " + std::to_string(frame_->size()));
    }
    double sum = theta_;
    if (theta_ < 0.0) throw InvalidMassError("negative mass on the frame");
    for (double v : singletons_) {
        if (v < 0.0) throw InvalidMassError("negative singleton mass");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw InvalidMassError("mass components sum to " + std::to_string(sum) + ", expected 1");
    }
}

MassFunction MassFunction::vacuous(FramePtr frame) {
    std::vector<double> zeros(frame->size(), 0.0);
    return MassFunction(std::move(frame), std::move(zeros), 1.0);
}

int MassFunction::argmax_label() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < singletons_.size(); ++i) {
        if (singletons_[i] > singletons_[best]) best = i;
    }
    return frame_->label_at(best);
}

FusionResult combine_dempster(const MassFunction& m1, const MassFunction& m2) {
    require_same_frame(m1, m2);
    RawProducts raw = pairwise_products(m1, m2);
    const double denom = 1.0 - raw.conflict;
    if (denom <= kTotalConflictEps) {
        throw TotalConflictError("sources are irreconcilable (conflict " +
                                 std::to_string(raw.conflict) + ")");
    }
    for (double& v : raw.singletons) v /= denom;
    return FusionResult{
        exactly_normalized(m1.frame(), std::move(raw.singletons), raw.theta / denom),
        raw.conflict, CombinationRule::dempster};
}

FusionResult combine_yager(const MassFunction& m1, const MassFunction& m2) {
    require_same_frame(m1, m2);
    RawProducts raw = pairwise_products(m1, m2);
    return FusionResult{
        exactly_normalized(m1.frame(), std::move(raw.singletons), raw.theta + raw.conflict),
        raw.conflict, CombinationRule::yager};
}

FusionResult combine(const MassFunction& m1, const MassFunction& m2, CombinationRule rule) {
    return rule == CombinationRule::dempster ? combine_dempster(m1, m2) : combine_yager(m1, m2);
}

FusionResult combine_many(std::span<const MassFunction> masses, CombinationRule rule) {
    if (masses.empty()) throw EmptyListError("combine_many needs at least one mass function");
    FusionResult acc{masses[0], 0.0, rule};
    for (std::size_t i = 1; i < masses.size(); ++i) {
        acc = combine(acc.fused, masses[i], rule);
    }
    return acc;
}

}  // namespace evifuse

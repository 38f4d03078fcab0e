#pragma once

#include <span>
#include <vector>

#include "evifuse/frame.hpp"

namespace evifuse {

/// Basic probability assignment over a frame, restricted to the focal family
/// this library works with: one mass per singleton class plus one mass on the
/// whole frame (the overall uncertainty U). This family is closed under both
/// combination rules, so the restriction loses nothing downstream.
class MassFunction {
public:
    /// @throws InvalidMassError if any component is negative or the total
    ///         deviates from 1 by more than 1e-9
    MassFunction(FramePtr frame, std::vector<double> singletons, double theta);

    /// The "know nothing" mass: all weight on the whole frame.
    static MassFunction vacuous(FramePtr frame);

    const FramePtr& frame() const noexcept { return frame_; }
    const std::vector<double>& singletons() const noexcept { return singletons_; }
    double singleton(std::size_t index) const { return singletons_.at(index); }
    /// Mass on the whole frame; this is the uncertainty U read by monitoring.
    double theta() const noexcept { return theta_; }

    /// Label with the largest singleton mass; ties resolve to the lowest
    /// frame index so reports are reproducible. The frame itself is never
    /// an answer.
    int argmax_label() const;

private:
    FramePtr frame_;
    std::vector<double> singletons_;
    double theta_;
};

enum class CombinationRule { dempster, yager };

/// Dempster combinations with conflict this close to 1 are rejected as
/// irreconcilable instead of dividing by a denormal.
inline constexpr double kTotalConflictEps = 1e-12;

struct FusionResult {
    MassFunction fused;
    /// Total product mass on empty intersections of the pairwise step that
    /// produced `fused` (for folds: of the last step). Dempster normalizes
    /// it away; Yager adds it to the frame mass.
    double conflict;
    CombinationRule rule;
};

/// @throws FrameMismatchError, TotalConflictError
FusionResult combine_dempster(const MassFunction& m1, const MassFunction& m2);

/// @throws FrameMismatchError
FusionResult combine_yager(const MassFunction& m1, const MassFunction& m2);

FusionResult combine(const MassFunction& m1, const MassFunction& m2, CombinationRule rule);

/// Left fold: ((m1 (+) m2) (+) m3) ... A single-element list is returned
/// as-is with zero conflict.
/// @throws EmptyListError, FrameMismatchError, TotalConflictError (Dempster)
FusionResult combine_many(std::span<const MassFunction> masses, CombinationRule rule);

}  // namespace evifuse

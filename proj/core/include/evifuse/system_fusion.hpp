#pragma once

#include <span>
#include <vector>

#include "evifuse/ensemble.hpp"
#include "evifuse/mass.hpp"

namespace evifuse {

/// Decision-level fusion of evidence sources (ensemble, rule model, ...);
/// the decision always reads from the Dempster fold, Yager is kept alongside
/// purely for uncertainty monitoring.
struct SystemVerdict {
    int y_sys = 0;
    double u_d_sys = 0.0;                     // frame mass of the Dempster fold
    double u_y_sys = 0.0;                     // frame mass of the Yager fold
    std::vector<MassFunction> source_masses;  // fold order
    MassFunction fused_mass;                  // Dempster fold
    MassFunction fused_mass_yager;            // Yager fold
    double conflict_dempster = 0.0;           // last-step conflicts
    double conflict_yager = 0.0;
};

/// General n-source fusion: both rules folded left to right over the same
/// sources. A single source is its own verdict.
/// @throws EmptyListError, FrameMismatchError
SystemVerdict system_fuse_n(std::span<const MassFunction> masses);

/// The standard two-source case: ensemble evidence plus rule-model evidence.
/// @throws FrameMismatchError
SystemVerdict system_fuse(const EnsembleVerdict& ec_verdict, const MassFunction& ke_mass);

}  // namespace evifuse

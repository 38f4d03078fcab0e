#include "evifuse/system_fusion.hpp"

namespace evifuse {

SystemVerdict system_fuse_n(std::span<const MassFunction> masses) {
    const FusionResult dempster = combine_many(masses, CombinationRule::dempster);
    const FusionResult yager = combine_many(masses, CombinationRule::yager);
    return SystemVerdict{dempster.fused.argmax_label(),
                         dempster.fused.theta(),
                         yager.fused.theta(),
                         std::vector<MassFunction>(masses.begin(), masses.end()),
                         dempster.fused,
                         yager.fused,
                         dempster.conflict,
                         yager.conflict};
}

SystemVerdict system_fuse(const EnsembleVerdict& ec_verdict, const MassFunction& ke_mass) {
    const MassFunction pair[] = {ec_verdict.fused_mass, ke_mass};
    return system_fuse_n(pair);
}

}  // namespace evifuse

#pragma once

// Test-only reference combiner working on the FULL power set of a frame with
// N singletons. Completely independent of the library under test: masses are
// plain vectors of length 2^N indexed by subset bitmask (bit i = singleton i,
// 0 = empty set, 2^N-1 = the whole frame).
//
// The production code restricts focal elements to singletons plus the whole
// frame; this oracle does not, so agreement between the two is evidence that
// the restricted fast path computes the same algebra.

#include <cassert>
#include <cstddef>
#include <vector>

namespace oracle {

using PowerSetMass = std::vector<double>;  // size 2^N, index = subset bitmask

struct PowerSetFusion {
    PowerSetMass fused;
    double conflict = 0.0;  // total product mass on empty intersections
};

inline std::size_t full_set(std::size_t n_singletons) {
    return (std::size_t{1} << n_singletons) - 1;
}

// Build a power-set vector from the restricted representation used by the
// library: one mass per singleton plus one mass on the whole frame.
inline PowerSetMass from_singletons(const std::vector<double>& singletons, double theta) {
    const std::size_t n = singletons.size();
    PowerSetMass m(std::size_t{1} << n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[std::size_t{1} << i] = singletons[i];
    m[full_set(n)] += theta;
    return m;
}

// One pairwise combination, before any conflict handling: intersect every
// focal-element pair, accumulate the product mass on the intersection, and
// route empty intersections to `conflict`.
inline PowerSetFusion combine_raw(const PowerSetMass& m1, const PowerSetMass& m2) {
    assert(m1.size() == m2.size());
    PowerSetFusion out;
    out.fused.assign(m1.size(), 0.0);
    for (std::size_t b = 0; b < m1.size(); ++b) {
        if (m1[b] == 0.0) continue;
        for (std::size_t c = 0; c < m2.size(); ++c) {
            if (m2[c] == 0.0) continue;
            const double product = m1[b] * m2[c];
            const std::size_t inter = b & c;
            if (inter == 0) {
                out.conflict += product;
            } else {
                out.fused[inter] += product;
            }
        }
    }
    return out;
}

// Dempster: normalize every surviving focal element by (1 - conflict).
inline PowerSetFusion combine_dempster(const PowerSetMass& m1, const PowerSetMass& m2) {
    PowerSetFusion out = combine_raw(m1, m2);
    const double denom = 1.0 - out.conflict;
    for (double& v : out.fused) v /= denom;
    return out;
}

// Yager: keep the raw numerators and park the conflict on the whole frame.
inline PowerSetFusion combine_yager(const PowerSetMass& m1, const PowerSetMass& m2) {
    PowerSetFusion out = combine_raw(m1, m2);
    out.fused[out.fused.size() - 1] += out.conflict;
    return out;
}

enum class Rule { dempster, yager };

// Left fold over a list of masses; reports the conflict of the last pairwise
// step, matching how the library reads the running uncertainty of a fold.
inline PowerSetFusion fold(const std::vector<PowerSetMass>& masses, Rule rule) {
    assert(!masses.empty());
    PowerSetFusion acc;
    acc.fused = masses[0];
    acc.conflict = 0.0;
    for (std::size_t i = 1; i < masses.size(); ++i) {
        acc = rule == Rule::dempster ? combine_dempster(acc.fused, masses[i])
                                     : combine_yager(acc.fused, masses[i]);
    }
    return acc;
}

}  // namespace oracle

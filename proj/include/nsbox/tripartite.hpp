#pragma once

#include <array>
#include <optional>

#include "nsbox/correlation.hpp"

namespace nsbox {

struct MonogamyResult {
    Rational m_ab_target;
    Rational max_m_ac;
    TripartiteCorrelation witness; // attains the maximum
};

/// Max CHSH mark between Alice and Charly over all tripartite no-signaling
/// boxes whose Alice-Bob mark is at least m_ab. Exact LP over the 64
/// binary-scenario probabilities.
MonogamyResult monogamy_max(const Rational& m_ab);

struct CloningFeasibility {
    Rational target_ab;
    Rational target_ac;
    bool feasible = false;
    std::optional<TripartiteCorrelation> witness; // feasible case
    // Infeasible double-PR demand only: P(b xor c = 1 | x, y=1, z=0) under
    // both PR constraints equals x, so Bob and Charly together read Alice's
    // input off their parity.
    std::optional<std::array<Rational, 2>> parity_leak;
};

/// Can Alice share CHSH mark target_ab with Bob and target_ac with Charly
/// simultaneously without signaling?
CloningFeasibility cloning_feasible(const Rational& m_ab = Rational(4),
                                    const Rational& m_ac = Rational(4));

} // namespace nsbox

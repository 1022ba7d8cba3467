#pragma once

#include <cstddef>
#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox::lp {

// minimize objective . v   subject to   rows . v = rhs,  v >= 0
//
// Inequalities are expressed by the caller through explicit slack variables.
// An empty objective means a pure feasibility problem.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<Rational> objective;

    void add_row(std::vector<Rational> coeffs, Rational b);
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
    Status status = Status::infeasible;
    std::vector<Rational> x;      // primal point, valid when optimal
    Rational objective_value = 0; // valid when optimal
    // Valid when optimal: dual prices y with y.A <= objective componentwise
    // and y.rhs == objective_value (an independently checkable certificate).
    std::vector<Rational> duals;
    // Valid when infeasible: y with y.A <= 0 componentwise and y.rhs > 0.
    std::vector<Rational> farkas;
};

/// Two-phase primal simplex over exact rationals with Bland's anti-cycling
/// rule. Deterministic: identical problems yield identical pivots.
Solution solve(const Problem& problem);

} // namespace nsbox::lp

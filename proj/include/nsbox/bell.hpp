#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsbox/correlation.hpp"

namespace nsbox {

// A local deterministic strategy: one response table per party.
struct DeterministicStrategy {
    std::vector<int> alice_map; // x -> a
    std::vector<int> bob_map;   // y -> b

    bool operator==(const DeterministicStrategy&) const = default;
};

inline constexpr std::uint64_t kDefaultStrategyCap = 1'000'000;

/// Number of deterministic strategies (na^nx * nb^ny) or nullopt on overflow.
std::optional<std::uint64_t> strategy_count(const Scenario& sc);

/// Complete, duplicate-free list in lexicographic order: the Alice response
/// tuple (a(0),...,a(nx-1)) is the major key, Bob's the minor key.
std::vector<DeterministicStrategy>
enumerate_deterministic(const Scenario& sc, std::uint64_t cap = kDefaultStrategyCap);

/// Strategy by its lexicographic index without materializing the whole list.
DeterministicStrategy strategy_at(const Scenario& sc, std::uint64_t index);

/// Deterministic 0/1 box realizing the strategy.
Correlation strategy_box(const Scenario& sc, const DeterministicStrategy& s);

// Linear functional over the table with its known bound values.
struct BellFunctional {
    std::string name;
    Scenario scenario;
    std::vector<Rational> coeff; // indexed like a table
    std::optional<Rational> local_bound;
    std::optional<double> quantum_bound;
    std::optional<Rational> ns_bound;

    const Rational& c(int x, int y, int a, int b) const {
        return coeff[scenario.index(x, y, a, b)];
    }
};

/// The CHSH game mark: sum over settings of P(a xor b = x.y | x,y).
/// Bounds: local 3, quantum 2+sqrt(2), no-signaling 4.
BellFunctional chsh_functional();

/// CHSH-class facet for the relabeling (alpha,beta,gamma):
/// success predicate a xor b = x.y xor alpha.x xor beta.y xor gamma.
BellFunctional chsh_facet(int alpha, int beta, int gamma);

/// All 8 facets ordered lexicographically by (alpha,beta,gamma).
std::vector<BellFunctional> chsh_facets();

/// Sum of c(x,y,a,b) * P(a,b|x,y); exact in rational mode.
Rational evaluate(const BellFunctional& f, const Correlation& corr);

/// Float-mode evaluation (also accepts rational boxes).
double evaluate_d(const BellFunctional& f, const Correlation& corr);

struct LocalBoundResult {
    Rational value;
    DeterministicStrategy argmax;
};

/// Max of evaluate over all deterministic strategies (convexity makes the
/// deterministic points sufficient).
LocalBoundResult local_bound(const BellFunctional& f,
                             std::uint64_t cap = kDefaultStrategyCap);

} // namespace nsbox

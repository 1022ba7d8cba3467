#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsbox/errors.hpp"
#include "nsbox/rational.hpp"

namespace nsbox {

inline constexpr double kDefaultTol = 1e-9;

// Input/output alphabet sizes of a bipartite box. Inputs and outputs are
// integers 0..n-1; in the binary scenario the spin outcomes map +1 <-> 0,
// -1 <-> 1.
struct Scenario {
    int nx = 2;
    int ny = 2;
    int na = 2;
    int nb = 2;

    static Scenario binary() { return Scenario{2, 2, 2, 2}; }

    bool is_binary() const { return nx == 2 && ny == 2 && na == 2 && nb == 2; }

    std::size_t table_size() const {
        return static_cast<std::size_t>(nx) * ny * na * nb;
    }

    // Index order is (x, y, a, b) everywhere, including files.
    std::size_t index(int x, int y, int a, int b) const {
        return ((static_cast<std::size_t>(x) * ny + y) * na + a) * nb + b;
    }

    void check(int x, int y, int a, int b) const;

    bool operator==(const Scenario&) const = default;
};

enum class NumericMode { rational, floating };

// A validated conditional probability table P(a,b|x,y). Exact-rational
// entries back the polytope geometry; float entries carry empirical and
// quantum data. Immutable after validation.
class Correlation {
  public:
    /// Rational mode: entries >= 0 and every per-setting sum exactly 1.
    static Correlation validate(const Scenario& sc, std::vector<Rational> table);

    /// Float mode: entries >= -tol (clamped at 0 conceptually for sums) and
    /// per-setting sums within tol of 1.
    static Correlation validate(const Scenario& sc, std::vector<double> table,
                                double tol = kDefaultTol);

    NumericMode mode() const { return mode_; }
    const Scenario& scenario() const { return scenario_; }

    const Rational& rat(int x, int y, int a, int b) const;
    double value(int x, int y, int a, int b) const;

    const std::vector<Rational>& rat_table() const;
    const std::vector<double>& float_table() const;

    /// Exact dyadic lift of a float table (identity on rational mode).
    Correlation to_rational() const;
    Correlation to_float() const;

    bool operator==(const Correlation& other) const;

  private:
    Correlation() = default;

    Scenario scenario_;
    NumericMode mode_ = NumericMode::rational;
    std::vector<Rational> rat_;
    std::vector<double> flt_;
};

enum class Party { alice, bob };

const char* party_name(Party p) noexcept;

// Output distribution of one party for one input, plus how much it moves when
// the other party's input changes (zero for no-signaling boxes).
struct MarginalReport {
    Party party;
    int input = 0;
    NumericMode mode = NumericMode::rational;
    std::vector<Rational> dist_rat;  // rational mode: average over other input
    std::vector<double> dist;        // double view, both modes
    Rational deviation_rat = 0;      // rational mode only
    double deviation = 0.0;          // max |P(o|in,other) - P(o|in,other')|
};

MarginalReport marginal(const Correlation& corr, Party party, int input);

struct NoSignalingReport {
    bool no_signaling = false;
    double worst_deviation = 0.0;
    Rational worst_deviation_rat = 0; // rational mode only
};

/// True iff each party's marginals are independent of the far input
/// (exact in rational mode, within tol in float mode).
NoSignalingReport is_no_signaling(const Correlation& corr, double tol = kDefaultTol);

/// Entrywise convex combination. Weights must be >= 0 and sum to 1 exactly.
Correlation mix(const std::vector<std::pair<Rational, Correlation>>& parts);

/// Float-mode mixing; weight sum checked within tol.
Correlation mix(const std::vector<std::pair<double, Correlation>>& parts,
                double tol = kDefaultTol);

// Raw per-cell counts of observed (x,y,a,b) rounds, indexed like a table.
struct SampleCounts {
    Scenario scenario;
    std::vector<std::uint64_t> cells;

    static SampleCounts zero(const Scenario& sc);
    void add(int x, int y, int a, int b, std::uint64_t n = 1);
    std::uint64_t setting_total(int x, int y) const;
};

struct EmpiricalCorrelation {
    Correlation corr;                          // float mode, conditional frequencies
    std::vector<std::uint64_t> setting_counts; // rounds per (x,y), index x*ny+y
    SampleCounts counts;
};

/// Conditional frequencies from counts. Every setting needs at least one round.
EmpiricalCorrelation from_samples(const SampleCounts& counts);

/// Convenience overload for explicit (x,y,a,b) round lists.
EmpiricalCorrelation from_samples(const Scenario& sc,
                                  std::span<const std::array<int, 4>> rounds);

/// All entries 1/(na*nb).
Correlation uniform_box(const Scenario& sc);

// ---------------------------------------------------------------------------
// Tripartite boxes (used by the monogamy / cloning LPs).

struct TripartiteScenario {
    int nx = 2, ny = 2, nz = 2;
    int na = 2, nb = 2, nc = 2;

    static TripartiteScenario binary() { return TripartiteScenario{}; }

    std::size_t table_size() const {
        return static_cast<std::size_t>(nx) * ny * nz * na * nb * nc;
    }

    std::size_t index(int x, int y, int z, int a, int b, int c) const {
        return ((((static_cast<std::size_t>(x) * ny + y) * nz + z) * na + a) * nb + b) * nc + c;
    }

    bool operator==(const TripartiteScenario&) const = default;
};

class TripartiteCorrelation {
  public:
    static TripartiteCorrelation validate(const TripartiteScenario& sc,
                                          std::vector<Rational> table);

    const TripartiteScenario& scenario() const { return scenario_; }
    const Rational& rat(int x, int y, int z, int a, int b, int c) const;
    const std::vector<Rational>& table() const { return table_; }

  private:
    TripartiteCorrelation() = default;
    TripartiteScenario scenario_;
    std::vector<Rational> table_;
};

/// Full tripartite no-signaling: every subset's marginal is independent of the
/// complementary inputs. Exact check.
bool is_no_signaling(const TripartiteCorrelation& corr);

} // namespace nsbox

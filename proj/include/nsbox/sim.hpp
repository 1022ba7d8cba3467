#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsbox/correlation.hpp"
#include "nsbox/kernels.hpp"
#include "nsbox/stats.hpp"
#include "nsbox/vec3.hpp"

namespace nsbox::sim {

enum class Model {
    pr_box,
    coin_game,
    exam1,
    toner_bacon,
    prbox_singlet, // single PR box per round, no communication
    local_baseline // shared randomness only
};

Model model_from_name(const std::string& name);
const char* model_name(Model m);

struct RunOptions {
    std::uint64_t seed = 0;
    int workers = 1;
    kernels::Impl impl = kernels::Impl::automatic;
    double sigma = 4.0;
};

// Seeded, reproducible record of one simulated round.
struct RoundRecord {
    std::uint64_t round = 0;
    int pair_index = -1; // direction-pair models
    int x = 0, y = 0;
    int a = 0, b = 0;
    std::uint64_t bits_communicated = 0;
    std::uint64_t prbox_uses = 0;
    std::uint64_t shared_digest = 0;
};

struct ResourceTotals {
    std::uint64_t rounds = 0;
    std::uint64_t bits_communicated = 0;
    std::uint64_t prbox_uses = 0;
};

struct Transcript {
    std::uint64_t seed = 0;
    std::string model;
    std::vector<RoundRecord> rounds;
    ResourceTotals totals;
};

/// JSON-lines: one meta object, then one record object per round.
void write_transcript_jsonl(std::ostream& out, const Transcript& t);

// ---------------------------------------------------------------------------
// Single rounds (reference path; also used by transcript generation).

/// PR box: a uniform, b = a xor x.y. One PR use.
std::pair<int, int> pr_box_round(std::uint64_t seed, std::uint64_t round, int x, int y);

// ---------------------------------------------------------------------------
// Whole-run operations. All are deterministic in (seed, parameters) and
// independent of worker count and kernel implementation.

struct CoinGameResult {
    kernels::CoinCounts counts;
    bool pattern_ok = false;       // zero violations of the hands/results pattern
    double empirical_mark = 0.0;   // CHSH mark of the observed frequencies
    double mark_stderr = 0.0;
    stats::StatTestReport report;  // per-player marginals at 50%
    std::optional<Transcript> transcript;
};

CoinGameResult coin_game(std::uint64_t rounds, const RunOptions& opts,
                         bool keep_transcript = false);

struct Exam1Result {
    kernels::Exam1Counts counts;
    double success_frequency = 0.0;
    stats::StatTestReport report; // joint success at 50%
};

Exam1Result exam1_guess_game(std::uint64_t rounds, const RunOptions& opts);

struct DirectionPair {
    Vec3 alice;
    Vec3 bob;
};

/// Seeded uniform direction pairs (stream kStreamDirections).
std::vector<DirectionPair> random_direction_pairs(std::uint64_t seed, int count);

/// Analytic 2x2 outcome distribution for a direction pair, indexed a*2+b.
using PairOracle = std::function<std::array<double, 4>(const Vec3&, const Vec3&)>;

struct EstimateResult {
    std::vector<kernels::PairCounts> per_setting;
    stats::StatTestReport report;
    std::optional<Correlation> empirical; // bit-input models only
    ResourceTotals totals;
};

/// Monte Carlo estimate of a direction-pair model against an analytic oracle.
/// Setting k simulates rounds [k*n, (k+1)*n).
EstimateResult estimate_directions(Model model, std::span<const DirectionPair> pairs,
                                   std::uint64_t rounds_per_setting,
                                   const RunOptions& opts, const PairOracle& oracle);

/// Monte Carlo estimate of the PR box over all four input settings against
/// the exact table.
EstimateResult estimate_pr_box(std::uint64_t rounds_per_setting, const RunOptions& opts);

/// Shared-randomness-only CHSH baseline; returns the empirical mark and its
/// standard error.
struct LocalBaselineResult {
    kernels::ChshGameCounts counts;
    double empirical_mark = 0.0;
    double mark_stderr = 0.0;
};

LocalBaselineResult local_baseline(std::uint64_t rounds, const RunOptions& opts);

/// Transcript of a direction-pair model run (scalar reference path).
Transcript entanglement_transcript(Model model, const DirectionPair& pair,
                                   std::uint64_t rounds, std::uint64_t seed);

/// Transcript of the coin game / exam1 / pr-box models.
Transcript bit_model_transcript(Model model, std::uint64_t rounds, std::uint64_t seed,
                                int x = 0, int y = 0);

/// Uniform-input sampling of a float-mode box; used to feed from_samples.
SampleCounts sample_box(const Correlation& box, std::uint64_t rounds,
                        std::uint64_t seed, const RunOptions& opts);

} // namespace nsbox::sim

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "nsbox/vec3.hpp"

namespace nsbox::kernels {

// Batch Monte Carlo kernels. Each has a scalar reference implementation and,
// on x86-64, an AVX2 variant selected at runtime. The two are bit-identical
// by construction (counter-based RNG, no FMA contraction, no libm inside),
// which the equivalence test suite asserts exactly.

enum class Impl { automatic, scalar, avx2 };

bool avx2_available();
Impl resolve(Impl requested);
const char* impl_name(Impl resolved);
Impl impl_from_name(const std::string& name); // "auto" | "scalar" | "avx2"

// 2x2 outcome tallies for a fixed configuration; cell index is a*2+b.
struct PairCounts {
    std::uint64_t rounds = 0;
    std::array<std::uint64_t, 4> cell{};
};

// Optional per-round outcome bytes (for transcripts and equivalence checks):
// pass a buffer of length n or nullptr.

/// PR box at fixed inputs: a uniform, b = a xor (x.y).
PairCounts pr_box_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                         int x, int y, Impl impl, std::uint8_t* cells = nullptr);

struct CoinCounts {
    std::uint64_t rounds = 0;
    // "at least one right hand -> equal results; both left -> opposite".
    std::uint64_t pattern_violations = 0;
    std::array<std::uint64_t, 2> heads{};          // outcome-0 tallies per player
    std::array<std::uint64_t, 4> setting_rounds{}; // index x*2+y
    std::array<std::uint64_t, 4> setting_success{};// a xor b == x.y
};

/// Coin-tossing game: uniform independent hands, PR-box results.
/// Outcome byte: x<<3 | y<<2 | a<<1 | b.
CoinCounts coin_game_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                            Impl impl, std::uint8_t* cells = nullptr);

struct Exam1Counts {
    std::uint64_t rounds = 0;
    std::uint64_t both_succeed = 0;    // own-input strategy: succeeds iff x == y
    std::uint64_t matching_inputs = 0; // rounds with x == y
};

/// Guess-the-other-input game under the own-input strategy.
Exam1Counts exam1_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                         Impl impl, std::uint8_t* cells = nullptr);

/// One-bit simulation of singlet measurements along fixed directions.
/// Outcome byte: alice<<1 | bob (output bits, +1 -> 0, -1 -> 1).
PairCounts toner_bacon_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              const Vec3& a_hat, const Vec3& b_hat, Impl impl,
                              std::uint8_t* cells = nullptr);

/// Single-PR-box simulation of singlet measurements (no communication).
PairCounts cgmp_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                       const Vec3& a_hat, const Vec3& b_hat, Impl impl,
                       std::uint8_t* cells = nullptr);

struct ChshGameCounts {
    std::uint64_t rounds = 0;
    std::array<std::uint64_t, 4> setting_rounds{};
    std::array<std::uint64_t, 4> setting_success{};
};

/// Shared-randomness-only CHSH rounds: a uniformly drawn strategy from the
/// eight that attain the local bound. Baseline for the no-resource model.
ChshGameCounts local_strategy_counts(std::uint64_t seed, std::uint64_t round0,
                                     std::uint64_t n, Impl impl,
                                     std::uint8_t* cells = nullptr);

} // namespace nsbox::kernels

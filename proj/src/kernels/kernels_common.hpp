#pragma once

#include <cstdint>

#include "nsbox/rng.hpp"
#include "nsbox/vec3.hpp"

// Per-round reference logic shared by the scalar kernels, the transcript
// writer, and the equivalence tests. The AVX2 kernels mirror these exact
// operation sequences lane-wise.

namespace nsbox::kernels::detail {

inline std::uint32_t sign_bit(double v) {
    return v < 0.0 ? 1u : 0u; // sign(0) counts as +1
}

struct PrRound {
    std::uint8_t a, b;
};

inline PrRound pr_round(std::uint64_t seed, std::uint64_t round, int x, int y) {
    const auto w = rng::philox_block(seed, round, rng::kStreamPrBox, 0);
    const std::uint8_t a = static_cast<std::uint8_t>(w[0] & 1u);
    const std::uint8_t b = static_cast<std::uint8_t>(a ^ (x & y & 1));
    return {a, b};
}

struct CoinRound {
    std::uint8_t x, y, a, b;
};

inline CoinRound coin_round(std::uint64_t seed, std::uint64_t round) {
    const auto w = rng::philox_block(seed, round, rng::kStreamInputs, 0);
    const int x = static_cast<int>(w[0] & 1u);
    const int y = static_cast<int>(w[1] & 1u);
    const PrRound pr = pr_round(seed, round, x, y);
    return {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y), pr.a, pr.b};
}

struct Exam1Round {
    std::uint8_t x, y;
    bool both_succeed;
};

inline Exam1Round exam1_round(std::uint64_t seed, std::uint64_t round) {
    const auto w = rng::philox_block(seed, round, rng::kStreamInputs, 0);
    const std::uint8_t x = static_cast<std::uint8_t>(w[0] & 1u);
    const std::uint8_t y = static_cast<std::uint8_t>(w[1] & 1u);
    // Own-input strategy: Alice guesses x, Bob guesses y; both guesses are
    // right exactly when x == y.
    return {x, y, x == y};
}

struct SimulationRound {
    std::uint8_t alice_bit, bob_bit; // +1 -> 0, -1 -> 1
    std::uint8_t pr_x, pr_y;         // PR inputs (cgmp only)
    std::uint8_t bits_communicated;
    std::uint8_t prbox_uses;
};

inline SimulationRound toner_bacon_round(std::uint64_t seed, std::uint64_t round,
                                         const Vec3& a_hat, const Vec3& b_hat) {
    const auto l1 = rng::unit_vector(seed, round, rng::kStreamLambda1);
    const auto l2 = rng::unit_vector(seed, round, rng::kStreamLambda2);
    const double a1 = a_hat.x * l1[0] + a_hat.y * l1[1] + a_hat.z * l1[2];
    const double a2 = a_hat.x * l2[0] + a_hat.y * l2[1] + a_hat.z * l2[2];
    const double b1 = b_hat.x * l1[0] + b_hat.y * l1[1] + b_hat.z * l1[2];
    const double b2 = b_hat.x * l2[0] + b_hat.y * l2[1] + b_hat.z * l2[2];

    const std::uint32_t s1 = sign_bit(a1);
    const std::uint32_t s2 = sign_bit(a2);
    const std::uint32_t c_bit = s1 ^ s2; // communicated: c = sgn(a.l1) sgn(a.l2)
    const double t = c_bit ? (b1 - b2) : (b1 + b2);

    SimulationRound r{};
    r.alice_bit = static_cast<std::uint8_t>(s1 ^ 1u); // alpha = -sgn(a.l1)
    r.bob_bit = static_cast<std::uint8_t>(sign_bit(t));
    r.bits_communicated = 1;
    r.prbox_uses = 0;
    return r;
}

inline SimulationRound cgmp_round(std::uint64_t seed, std::uint64_t round,
                                  const Vec3& a_hat, const Vec3& b_hat) {
    const auto l1 = rng::unit_vector(seed, round, rng::kStreamLambda1);
    const auto l2 = rng::unit_vector(seed, round, rng::kStreamLambda2);
    const double a1 = a_hat.x * l1[0] + a_hat.y * l1[1] + a_hat.z * l1[2];
    const double a2 = a_hat.x * l2[0] + a_hat.y * l2[1] + a_hat.z * l2[2];
    const double b1 = b_hat.x * l1[0] + b_hat.y * l1[1] + b_hat.z * l1[2];
    const double b2 = b_hat.x * l2[0] + b_hat.y * l2[1] + b_hat.z * l2[2];

    const std::uint32_t s1 = sign_bit(a1);
    const std::uint32_t s2 = sign_bit(a2);
    const std::uint32_t sp = sign_bit(b1 + b2);
    const std::uint32_t sm = sign_bit(b1 - b2);
    const std::uint32_t x = s1 ^ s2;
    const std::uint32_t y = sp ^ sm;

    const auto w = rng::philox_block(seed, round, rng::kStreamPrBox, 0);
    const std::uint32_t a_pr = w[0] & 1u;
    const std::uint32_t b_pr = a_pr ^ (x & y);

    SimulationRound r{};
    r.alice_bit = static_cast<std::uint8_t>(1u ^ s1 ^ a_pr);
    r.bob_bit = static_cast<std::uint8_t>(sp ^ b_pr);
    r.pr_x = static_cast<std::uint8_t>(x);
    r.pr_y = static_cast<std::uint8_t>(y);
    r.bits_communicated = 0;
    r.prbox_uses = 1;
    return r;
}

// The eight deterministic strategies with CHSH mark 3, packed as
// a0<<3 | a1<<2 | b0<<1 | b1.
inline constexpr std::uint8_t kMarkThreeStrategies[8] = {
    0b0000, 0b0100, 0b1011, 0b1111, // constant-b family
    0b0001, 0b1001, 0b0110, 0b1110, // anti-constant-b family
};

struct ChshLocalRound {
    std::uint8_t x, y;
    bool success;
};

inline ChshLocalRound local_strategy_round(std::uint64_t seed, std::uint64_t round) {
    const auto wi = rng::philox_block(seed, round, rng::kStreamInputs, 0);
    const std::uint32_t x = wi[0] & 1u;
    const std::uint32_t y = wi[1] & 1u;
    const auto ws = rng::philox_block(seed, round, rng::kStreamStrategy, 0);
    const std::uint8_t s = kMarkThreeStrategies[ws[0] & 7u];
    const std::uint32_t a = (s >> (3 - x)) & 1u;
    const std::uint32_t b = (s >> (1 - y)) & 1u;
    return {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y),
            (a ^ b) == (x & y)};
}

} // namespace nsbox::kernels::detail

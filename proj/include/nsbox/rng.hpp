#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace nsbox::rng {

// Counter-based randomness: every draw is a pure function of
// (master seed, round index, stream label, block index). Rounds can be
// generated in any order, by any number of workers, on the scalar or the
// SIMD path, with identical results.

// Stream labels (part of the reproducibility contract).
inline constexpr std::uint32_t kStreamInputs = 1;     // per-round input bits
inline constexpr std::uint32_t kStreamPrBox = 2;      // PR-box internal coin
inline constexpr std::uint32_t kStreamLambda1 = 3;    // shared unit vector 1
inline constexpr std::uint32_t kStreamLambda2 = 4;    // shared unit vector 2
inline constexpr std::uint32_t kStreamSearch = 5;     // optimizer restarts
inline constexpr std::uint32_t kStreamDirections = 6; // random direction pairs
inline constexpr std::uint32_t kStreamSampler = 7;    // box-sampling rounds
inline constexpr std::uint32_t kStreamStrategy = 8;   // local-baseline strategy pick
inline constexpr std::uint32_t kStreamGeneric = 9;    // misc test draws

struct PhiloxKey {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;
};

/// Philox-4x32, 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, PhiloxKey key);

/// Block `block` of the (seed, round, label) stream.
std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t round,
                                          std::uint32_t label, std::uint32_t block);

/// Uniform in [0,1) with 52 random bits. Exactly mirrored by the SIMD path.
double u01_from(std::uint32_t w0, std::uint32_t w1);

/// Deterministic natural log (atanh series, about 1e-14 relative accuracy).
/// Used instead of libm inside dispatched kernels so scalar and SIMD results
/// are bit-identical. Argument must be positive and >= 2^-1000.
double det_log(double x);

// Series/threshold constants shared with the AVX2 mirror.
inline constexpr double kPolarMinS = 9.33263618503218879e-302; // 2^-1000
inline constexpr int kLogTerms = 10;
inline constexpr double kLogCoeff[kLogTerms] = {
    1.0,        1.0 / 3.0,  1.0 / 5.0,  1.0 / 7.0,  1.0 / 9.0,
    1.0 / 11.0, 1.0 / 13.0, 1.0 / 15.0, 1.0 / 17.0, 1.0 / 19.0,
};
inline constexpr double kLn2 = 0.693147180559945309417232121458;
inline constexpr double kSqrt2 = 1.41421356237309504880168872421;

/// Standard-normal pair by the polar method; each attempt consumes one block
/// starting at *block, which is advanced past the accepted attempt.
std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t round,
                                        std::uint32_t label, std::uint32_t* block);

/// Uniform unit 3-vector: three normalized standard normals from the
/// (seed, round, label) stream, starting at block 0.
std::array<double, 3> unit_vector(std::uint64_t seed, std::uint64_t round,
                                  std::uint32_t label);

// Word-sequential view over one stream, for consumers that do not need the
// block-aligned layout (optimizer restarts, direction sampling, tests).
class RoundStream {
  public:
    RoundStream(std::uint64_t seed, std::uint64_t round, std::uint32_t label)
        : seed_(seed), round_(round), label_(label) {}

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    double next_u01();

  private:
    std::uint64_t seed_;
    std::uint64_t round_;
    std::uint32_t label_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int avail_ = 0;
};

} // namespace nsbox::rng

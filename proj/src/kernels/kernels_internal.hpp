#pragma once

#include "nsbox/kernels.hpp"

// Per-implementation entry points wired together by dispatch.cpp.

namespace nsbox::kernels {

PairCounts pr_box_counts_scalar(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                                int x, int y, std::uint8_t* cells);
CoinCounts coin_game_counts_scalar(std::uint64_t seed, std::uint64_t round0,
                                   std::uint64_t n, std::uint8_t* cells);
Exam1Counts exam1_counts_scalar(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                                std::uint8_t* cells);
PairCounts toner_bacon_counts_scalar(std::uint64_t seed, std::uint64_t round0,
                                     std::uint64_t n, const Vec3& a_hat, const Vec3& b_hat,
                                     std::uint8_t* cells);
PairCounts cgmp_counts_scalar(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              const Vec3& a_hat, const Vec3& b_hat, std::uint8_t* cells);
ChshGameCounts local_strategy_counts_scalar(std::uint64_t seed, std::uint64_t round0,
                                            std::uint64_t n, std::uint8_t* cells);

#if defined(NSBOX_HAVE_AVX2_BUILD)
PairCounts pr_box_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              int x, int y, std::uint8_t* cells);
CoinCounts coin_game_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                                 std::uint8_t* cells);
Exam1Counts exam1_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              std::uint8_t* cells);
PairCounts toner_bacon_counts_avx2(std::uint64_t seed, std::uint64_t round0,
                                   std::uint64_t n, const Vec3& a_hat, const Vec3& b_hat,
                                   std::uint8_t* cells);
PairCounts cgmp_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                            const Vec3& a_hat, const Vec3& b_hat, std::uint8_t* cells);
ChshGameCounts local_strategy_counts_avx2(std::uint64_t seed, std::uint64_t round0,
                                          std::uint64_t n, std::uint8_t* cells);
#endif

} // namespace nsbox::kernels

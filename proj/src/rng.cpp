#include "nsbox/rng.hpp"

#include <bit>
#include <cmath>

namespace nsbox::rng {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;
} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, PhiloxKey key) {
    std::uint32_t k0 = key.k0;
    std::uint32_t k1 = key.k1;
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
               static_cast<std::uint32_t>(p0)};
        k0 += kW0;
        k1 += kW1;
    }
    return ctr;
}

std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t round,
                                          std::uint32_t label, std::uint32_t block) {
    const PhiloxKey key{static_cast<std::uint32_t>(seed),
                        static_cast<std::uint32_t>(seed >> 32)};
    return philox4x32({static_cast<std::uint32_t>(round),
                       static_cast<std::uint32_t>(round >> 32), label, block},
                      key);
}

double u01_from(std::uint32_t w0, std::uint32_t w1) {
    const std::uint64_t u = (static_cast<std::uint64_t>(w1) << 32) | w0;
    return static_cast<double>(u >> 12) * 0x1.0p-52;
}

double det_log(double x) {
    // x = m * 2^e with m in (sqrt(2)/2, sqrt(2)]; log m by the atanh series.
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    std::int64_t e = static_cast<std::int64_t>((bits >> 52) & 0x7FF) - 1023;
    double m = std::bit_cast<double>((bits & 0xFFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
    if (m > kSqrt2) {
        m *= 0.5;
        e += 1;
    }
    const double z = (m - 1.0) / (m + 1.0);
    const double z2 = z * z;
    double p = kLogCoeff[kLogTerms - 1];
    for (int i = kLogTerms - 2; i >= 0; --i)
        p = p * z2 + kLogCoeff[i];
    return 2.0 * z * p + static_cast<double>(e) * kLn2;
}

std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t round,
                                        std::uint32_t label, std::uint32_t* block) {
    for (;;) {
        const auto w = philox_block(seed, round, label, (*block)++);
        const double u = 2.0 * u01_from(w[0], w[1]) - 1.0;
        const double v = 2.0 * u01_from(w[2], w[3]) - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s < kPolarMinS)
            continue;
        const double f = std::sqrt(-2.0 * det_log(s) / s);
        return {u * f, v * f};
    }
}

std::array<double, 3> unit_vector(std::uint64_t seed, std::uint64_t round,
                                  std::uint32_t label) {
    std::uint32_t block = 0;
    const auto [g0, g1] = gaussian_pair(seed, round, label, &block);
    const auto [g2, g3] = gaussian_pair(seed, round, label, &block);
    (void)g3;
    const double nn = g0 * g0 + g1 * g1 + g2 * g2;
    const double inv = 1.0 / std::sqrt(nn);
    return {g0 * inv, g1 * inv, g2 * inv};
}

std::uint32_t RoundStream::next_u32() {
    if (avail_ == 0) {
        buf_ = philox_block(seed_, round_, label_, block_++);
        avail_ = 4;
    }
    return buf_[4 - avail_--];
}

std::uint64_t RoundStream::next_u64() {
    const std::uint32_t lo = next_u32();
    const std::uint32_t hi = next_u32();
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

double RoundStream::next_u01() {
    const std::uint32_t w0 = next_u32();
    const std::uint32_t w1 = next_u32();
    return u01_from(w0, w1);
}

} // namespace nsbox::rng

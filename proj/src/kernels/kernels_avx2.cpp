// AVX2 variants of the Monte Carlo kernels. Each mirrors the scalar
// reference op for op: Philox is exact integer math, u01/log/sqrt/dot use
// only correctly-rounded IEEE operations in the same order, so results are
// bit-identical per round. The equivalence tests assert this, not "close".

#include <immintrin.h>

#include "kernels_common.hpp"
#include "kernels_internal.hpp"

namespace nsbox::kernels {

namespace {

using namespace detail;

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

// ---- 4-lane Philox (one 32-bit word vector per counter word) --------------

struct Words4 {
    __m128i w0, w1, w2, w3;
};

inline void mulhilo4(__m128i a, std::uint32_t m, __m128i* hi, __m128i* lo) {
    const __m128i mm = _mm_set1_epi32(static_cast<int>(m));
    const __m128i even = _mm_mul_epu32(a, mm);
    const __m128i odd = _mm_mul_epu32(_mm_srli_epi64(a, 32), mm);
    *lo = _mm_blend_epi32(even, _mm_slli_epi64(odd, 32), 0b1010);
    *hi = _mm_blend_epi32(_mm_srli_epi64(even, 32), odd, 0b1010);
}

inline Words4 philox4(std::uint64_t seed, __m128i c0, __m128i c1, __m128i c2, __m128i c3) {
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 0; r < 10; ++r) {
        __m128i hi0, lo0, hi1, lo1;
        mulhilo4(c0, kM0, &hi0, &lo0);
        mulhilo4(c2, kM1, &hi1, &lo1);
        const __m128i vk0 = _mm_set1_epi32(static_cast<int>(k0));
        const __m128i vk1 = _mm_set1_epi32(static_cast<int>(k1));
        const __m128i n0 = _mm_xor_si128(_mm_xor_si128(hi1, c1), vk0);
        const __m128i n2 = _mm_xor_si128(_mm_xor_si128(hi0, c3), vk1);
        c0 = n0;
        c1 = lo1;
        c2 = n2;
        c3 = lo0;
        k0 += kW0;
        k1 += kW1;
    }
    return {c0, c1, c2, c3};
}

// ---- 8-lane Philox (for the integer-only kernels) --------------------------

struct Words8 {
    __m256i w0, w1, w2, w3;
};

inline void mulhilo8(__m256i a, std::uint32_t m, __m256i* hi, __m256i* lo) {
    const __m256i mm = _mm256_set1_epi32(static_cast<int>(m));
    const __m256i even = _mm256_mul_epu32(a, mm);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), mm);
    *lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
    *hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
}

inline Words8 philox8(std::uint64_t seed, __m256i c0, __m256i c1, __m256i c2, __m256i c3) {
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 0; r < 10; ++r) {
        __m256i hi0, lo0, hi1, lo1;
        mulhilo8(c0, kM0, &hi0, &lo0);
        mulhilo8(c2, kM1, &hi1, &lo1);
        const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
        const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), vk0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), vk1);
        c0 = n0;
        c1 = lo1;
        c2 = n2;
        c3 = lo0;
        k0 += kW0;
        k1 += kW1;
    }
    return {c0, c1, c2, c3};
}

inline __m256i round_lo8(std::uint64_t round0) {
    alignas(32) std::uint32_t v[8];
    for (int i = 0; i < 8; ++i)
        v[i] = static_cast<std::uint32_t>(round0 + i);
    return _mm256_load_si256(reinterpret_cast<const __m256i*>(v));
}

inline __m256i round_hi8(std::uint64_t round0) {
    alignas(32) std::uint32_t v[8];
    for (int i = 0; i < 8; ++i)
        v[i] = static_cast<std::uint32_t>((round0 + i) >> 32);
    return _mm256_load_si256(reinterpret_cast<const __m256i*>(v));
}

// ---- double helpers --------------------------------------------------------

inline __m256d u01x4(__m128i w0, __m128i w1) {
    const __m256i lo = _mm256_cvtepu32_epi64(w0);
    const __m256i hi = _mm256_cvtepu32_epi64(w1);
    const __m256i u = _mm256_or_si256(_mm256_slli_epi64(hi, 32), lo);
    const __m256i u52 = _mm256_srli_epi64(u, 12);
    // 2^52 | mantissa trick: exact for values below 2^52.
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    const __m256d d =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(u52, magic)),
                      _mm256_set1_pd(0x1.0p52));
    return _mm256_mul_pd(d, _mm256_set1_pd(0x1.0p-52));
}

inline __m256d det_log4(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    __m256i e = _mm256_sub_epi64(
        _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7FF)),
        _mm256_set1_epi64x(1023));
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0xFFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FF0000000000000LL)));
    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(rng::kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_sub_epi64(e, _mm256_castpd_si256(big)); // mask lanes are -1

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d z = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z2 = _mm256_mul_pd(z, z);
    __m256d p = _mm256_set1_pd(rng::kLogCoeff[rng::kLogTerms - 1]);
    for (int i = rng::kLogTerms - 2; i >= 0; --i)
        p = _mm256_add_pd(_mm256_mul_pd(p, z2), _mm256_set1_pd(rng::kLogCoeff[i]));

    // Exponent lanes are tiny signed integers; 1.5*2^52 bias converts exactly.
    const __m256i bias = _mm256_set1_epi64x(0x4338000000000000LL);
    const __m256d e_d = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(e, bias)),
                                      _mm256_set1_pd(0x1.8p52));
    return _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), z), p),
                         _mm256_mul_pd(e_d, _mm256_set1_pd(rng::kLn2)));
}

inline __m128i pack64to32(__m256i v) {
    const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    return _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(v, idx));
}

// Polar-method Gaussian pair for four independent rounds; per-lane block
// counters advance exactly as in the scalar reference.
inline void gaussian_pair4(std::uint64_t seed, __m128i c0, __m128i c1,
                           std::uint32_t label, __m256i* block, __m256d* g0,
                           __m256d* g1) {
    const __m128i c2 = _mm_set1_epi32(static_cast<int>(label));
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d min_s = _mm256_set1_pd(rng::kPolarMinS);

    __m256d active = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    __m256d out0 = _mm256_setzero_pd();
    __m256d out1 = _mm256_setzero_pd();

    while (_mm256_movemask_pd(active) != 0) {
        const Words4 w = philox4(seed, c0, c1, c2, pack64to32(*block));
        const __m256d u = _mm256_sub_pd(_mm256_mul_pd(two, u01x4(w.w0, w.w1)), one);
        const __m256d v = _mm256_sub_pd(_mm256_mul_pd(two, u01x4(w.w2, w.w3)), one);
        const __m256d s = _mm256_add_pd(_mm256_mul_pd(u, u), _mm256_mul_pd(v, v));

        const __m256d accept =
            _mm256_and_pd(_mm256_cmp_pd(s, one, _CMP_LT_OQ),
                          _mm256_cmp_pd(s, min_s, _CMP_GE_OQ));
        const __m256d newly = _mm256_and_pd(accept, active);

        // f = sqrt(-2 log(s) / s); rejected lanes may produce NaN, discarded.
        const __m256d f = _mm256_sqrt_pd(_mm256_div_pd(
            _mm256_mul_pd(_mm256_set1_pd(-2.0), det_log4(s)), s));
        out0 = _mm256_blendv_pd(out0, _mm256_mul_pd(u, f), newly);
        out1 = _mm256_blendv_pd(out1, _mm256_mul_pd(v, f), newly);

        *block = _mm256_sub_epi64(*block, _mm256_castpd_si256(active));
        active = _mm256_andnot_pd(accept, active);
    }
    *g0 = out0;
    *g1 = out1;
}

struct UnitVec4 {
    __m256d x, y, z;
};

inline UnitVec4 unit_vector4(std::uint64_t seed, std::uint64_t round0,
                             std::uint32_t label) {
    alignas(16) std::uint32_t lo[4], hi[4];
    for (int i = 0; i < 4; ++i) {
        lo[i] = static_cast<std::uint32_t>(round0 + i);
        hi[i] = static_cast<std::uint32_t>((round0 + i) >> 32);
    }
    const __m128i c0 = _mm_load_si128(reinterpret_cast<const __m128i*>(lo));
    const __m128i c1 = _mm_load_si128(reinterpret_cast<const __m128i*>(hi));

    __m256i block = _mm256_setzero_si256();
    __m256d g0, g1, g2, g3;
    gaussian_pair4(seed, c0, c1, label, &block, &g0, &g1);
    gaussian_pair4(seed, c0, c1, label, &block, &g2, &g3);

    const __m256d nn = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(g0, g0), _mm256_mul_pd(g1, g1)),
        _mm256_mul_pd(g2, g2));
    const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_sqrt_pd(nn));
    return {_mm256_mul_pd(g0, inv), _mm256_mul_pd(g1, inv), _mm256_mul_pd(g2, inv)};
}

inline __m256d dot4(const Vec3& k, const UnitVec4& l) {
    return _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(k.x), l.x),
                      _mm256_mul_pd(_mm256_set1_pd(k.y), l.y)),
        _mm256_mul_pd(_mm256_set1_pd(k.z), l.z));
}

inline int ltz_mask(__m256d v) {
    return _mm256_movemask_pd(_mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_LT_OQ));
}

} // namespace

// ---- entanglement-model kernels --------------------------------------------

PairCounts toner_bacon_counts_avx2(std::uint64_t seed, std::uint64_t round0,
                                   std::uint64_t n, const Vec3& a_hat, const Vec3& b_hat,
                                   std::uint8_t* cells) {
    PairCounts out;
    out.rounds = n;
    std::uint64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const std::uint64_t r0 = round0 + i;
        const UnitVec4 l1 = unit_vector4(seed, r0, rng::kStreamLambda1);
        const UnitVec4 l2 = unit_vector4(seed, r0, rng::kStreamLambda2);
        const __m256d a1 = dot4(a_hat, l1);
        const __m256d a2 = dot4(a_hat, l2);
        const __m256d b1 = dot4(b_hat, l1);
        const __m256d b2 = dot4(b_hat, l2);

        const __m256d s1m = _mm256_cmp_pd(a1, _mm256_setzero_pd(), _CMP_LT_OQ);
        const __m256d s2m = _mm256_cmp_pd(a2, _mm256_setzero_pd(), _CMP_LT_OQ);
        const __m256d cmask = _mm256_xor_pd(s1m, s2m);
        // c in {+1,-1}: t = b1 + c*b2 equals the scalar branch exactly.
        const __m256d c = _mm256_blendv_pd(_mm256_set1_pd(1.0), _mm256_set1_pd(-1.0), cmask);
        const __m256d t = _mm256_add_pd(b1, _mm256_mul_pd(c, b2));

        const int alice = _mm256_movemask_pd(s1m) ^ 0xF; // alpha_bit = s1 ^ 1
        const int bob = ltz_mask(t);
        for (int lane = 0; lane < 4; ++lane) {
            const std::uint8_t cell = static_cast<std::uint8_t>(
                ((alice >> lane) & 1) * 2 + ((bob >> lane) & 1));
            ++out.cell[cell];
            if (cells)
                cells[i + lane] = cell;
        }
    }
    for (; i < n; ++i) {
        const SimulationRound r = toner_bacon_round(seed, round0 + i, a_hat, b_hat);
        const std::uint8_t cell = static_cast<std::uint8_t>(r.alice_bit * 2 + r.bob_bit);
        ++out.cell[cell];
        if (cells)
            cells[i] = cell;
    }
    return out;
}

PairCounts cgmp_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                            const Vec3& a_hat, const Vec3& b_hat, std::uint8_t* cells) {
    PairCounts out;
    out.rounds = n;
    std::uint64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const std::uint64_t r0 = round0 + i;
        const UnitVec4 l1 = unit_vector4(seed, r0, rng::kStreamLambda1);
        const UnitVec4 l2 = unit_vector4(seed, r0, rng::kStreamLambda2);
        const __m256d a1 = dot4(a_hat, l1);
        const __m256d a2 = dot4(a_hat, l2);
        const __m256d b1 = dot4(b_hat, l1);
        const __m256d b2 = dot4(b_hat, l2);

        const int s1 = ltz_mask(a1);
        const int s2 = ltz_mask(a2);
        const int sp = ltz_mask(_mm256_add_pd(b1, b2));
        const int sm = ltz_mask(_mm256_sub_pd(b1, b2));
        const int x = s1 ^ s2;
        const int y = sp ^ sm;

        alignas(16) std::uint32_t lo[4], hi[4];
        for (int lane = 0; lane < 4; ++lane) {
            lo[lane] = static_cast<std::uint32_t>(r0 + lane);
            hi[lane] = static_cast<std::uint32_t>((r0 + lane) >> 32);
        }
        const Words4 w = philox4(seed,
                                 _mm_load_si128(reinterpret_cast<const __m128i*>(lo)),
                                 _mm_load_si128(reinterpret_cast<const __m128i*>(hi)),
                                 _mm_set1_epi32(static_cast<int>(rng::kStreamPrBox)),
                                 _mm_setzero_si128());
        alignas(16) std::uint32_t w0[4];
        _mm_store_si128(reinterpret_cast<__m128i*>(w0), w.w0);
        int a_pr = 0;
        for (int lane = 0; lane < 4; ++lane)
            a_pr |= static_cast<int>(w0[lane] & 1u) << lane;

        const int b_pr = a_pr ^ (x & y);
        const int alice = 0xF ^ s1 ^ a_pr;
        const int bob = sp ^ b_pr;
        for (int lane = 0; lane < 4; ++lane) {
            const std::uint8_t cell = static_cast<std::uint8_t>(
                ((alice >> lane) & 1) * 2 + ((bob >> lane) & 1));
            ++out.cell[cell];
            if (cells)
                cells[i + lane] = cell;
        }
    }
    for (; i < n; ++i) {
        const SimulationRound r = cgmp_round(seed, round0 + i, a_hat, b_hat);
        const std::uint8_t cell = static_cast<std::uint8_t>(r.alice_bit * 2 + r.bob_bit);
        ++out.cell[cell];
        if (cells)
            cells[i] = cell;
    }
    return out;
}

// ---- integer-only kernels ---------------------------------------------------

PairCounts pr_box_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              int x, int y, std::uint8_t* cells) {
    PairCounts out;
    out.rounds = n;
    const std::uint32_t xy = static_cast<std::uint32_t>(x & y & 1);
    std::uint64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const Words8 w = philox8(seed, round_lo8(round0 + i), round_hi8(round0 + i),
                                 _mm256_set1_epi32(static_cast<int>(rng::kStreamPrBox)),
                                 _mm256_setzero_si256());
        alignas(32) std::uint32_t w0[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(w0), w.w0);
        for (int lane = 0; lane < 8; ++lane) {
            const std::uint32_t a = w0[lane] & 1u;
            const std::uint32_t b = a ^ xy;
            const std::uint8_t cell = static_cast<std::uint8_t>(a * 2 + b);
            ++out.cell[cell];
            if (cells)
                cells[i + lane] = cell;
        }
    }
    for (; i < n; ++i) {
        const PrRound r = pr_round(seed, round0 + i, x, y);
        const std::uint8_t cell = static_cast<std::uint8_t>(r.a * 2 + r.b);
        ++out.cell[cell];
        if (cells)
            cells[i] = cell;
    }
    return out;
}

CoinCounts coin_game_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                                 std::uint8_t* cells) {
    CoinCounts out;
    out.rounds = n;
    std::uint64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i lo = round_lo8(round0 + i);
        const __m256i hi = round_hi8(round0 + i);
        const Words8 wi = philox8(seed, lo, hi,
                                  _mm256_set1_epi32(static_cast<int>(rng::kStreamInputs)),
                                  _mm256_setzero_si256());
        const Words8 wp = philox8(seed, lo, hi,
                                  _mm256_set1_epi32(static_cast<int>(rng::kStreamPrBox)),
                                  _mm256_setzero_si256());
        alignas(32) std::uint32_t xw[8], yw[8], aw[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(xw), wi.w0);
        _mm256_store_si256(reinterpret_cast<__m256i*>(yw), wi.w1);
        _mm256_store_si256(reinterpret_cast<__m256i*>(aw), wp.w0);
        for (int lane = 0; lane < 8; ++lane) {
            const std::uint32_t x = xw[lane] & 1u;
            const std::uint32_t y = yw[lane] & 1u;
            const std::uint32_t a = aw[lane] & 1u;
            const std::uint32_t b = a ^ (x & y);
            const int setting = static_cast<int>(x * 2 + y);
            ++out.setting_rounds[setting];
            ++out.setting_success[setting]; // a^b == x&y by construction
            out.heads[0] += a == 0;
            out.heads[1] += b == 0;
            if (cells)
                cells[i + lane] =
                    static_cast<std::uint8_t>(x << 3 | y << 2 | a << 1 | b);
        }
    }
    for (; i < n; ++i) {
        const CoinRound r = coin_round(seed, round0 + i);
        const int setting = r.x * 2 + r.y;
        const bool success = (r.a ^ r.b) == (r.x & r.y);
        ++out.setting_rounds[setting];
        out.setting_success[setting] += success;
        out.pattern_violations += !success;
        out.heads[0] += r.a == 0;
        out.heads[1] += r.b == 0;
        if (cells)
            cells[i] = static_cast<std::uint8_t>(r.x << 3 | r.y << 2 | r.a << 1 | r.b);
    }
    return out;
}

Exam1Counts exam1_counts_avx2(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              std::uint8_t* cells) {
    Exam1Counts out;
    out.rounds = n;
    std::uint64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const Words8 w = philox8(seed, round_lo8(round0 + i), round_hi8(round0 + i),
                                 _mm256_set1_epi32(static_cast<int>(rng::kStreamInputs)),
                                 _mm256_setzero_si256());
        alignas(32) std::uint32_t xw[8], yw[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(xw), w.w0);
        _mm256_store_si256(reinterpret_cast<__m256i*>(yw), w.w1);
        for (int lane = 0; lane < 8; ++lane) {
            const std::uint32_t x = xw[lane] & 1u;
            const std::uint32_t y = yw[lane] & 1u;
            const bool both = x == y;
            out.both_succeed += both;
            out.matching_inputs += both;
            if (cells)
                cells[i + lane] = static_cast<std::uint8_t>(x << 2 | y << 1 | both);
        }
    }
    for (; i < n; ++i) {
        const Exam1Round r = exam1_round(seed, round0 + i);
        out.both_succeed += r.both_succeed;
        out.matching_inputs += r.x == r.y;
        if (cells)
            cells[i] = static_cast<std::uint8_t>(r.x << 2 | r.y << 1 | r.both_succeed);
    }
    return out;
}

ChshGameCounts local_strategy_counts_avx2(std::uint64_t seed, std::uint64_t round0,
                                          std::uint64_t n, std::uint8_t* cells) {
    ChshGameCounts out;
    out.rounds = n;
    std::uint64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i lo = round_lo8(round0 + i);
        const __m256i hi = round_hi8(round0 + i);
        const Words8 wi = philox8(seed, lo, hi,
                                  _mm256_set1_epi32(static_cast<int>(rng::kStreamInputs)),
                                  _mm256_setzero_si256());
        const Words8 ws = philox8(seed, lo, hi,
                                  _mm256_set1_epi32(static_cast<int>(rng::kStreamStrategy)),
                                  _mm256_setzero_si256());
        alignas(32) std::uint32_t xw[8], yw[8], sw[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(xw), wi.w0);
        _mm256_store_si256(reinterpret_cast<__m256i*>(yw), wi.w1);
        _mm256_store_si256(reinterpret_cast<__m256i*>(sw), ws.w0);
        for (int lane = 0; lane < 8; ++lane) {
            const std::uint32_t x = xw[lane] & 1u;
            const std::uint32_t y = yw[lane] & 1u;
            const std::uint8_t s = kMarkThreeStrategies[sw[lane] & 7u];
            const std::uint32_t a = (s >> (3 - x)) & 1u;
            const std::uint32_t b = (s >> (1 - y)) & 1u;
            const bool success = (a ^ b) == (x & y);
            const int setting = static_cast<int>(x * 2 + y);
            ++out.setting_rounds[setting];
            out.setting_success[setting] += success;
            if (cells)
                cells[i + lane] = static_cast<std::uint8_t>(x << 2 | y << 1 | success);
        }
    }
    for (; i < n; ++i) {
        const ChshLocalRound r = local_strategy_round(seed, round0 + i);
        const int setting = r.x * 2 + r.y;
        ++out.setting_rounds[setting];
        out.setting_success[setting] += r.success;
        if (cells)
            cells[i] = static_cast<std::uint8_t>(r.x << 2 | r.y << 1 | r.success);
    }
    return out;
}

} // namespace nsbox::kernels

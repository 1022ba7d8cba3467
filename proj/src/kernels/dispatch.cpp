#include "kernels_internal.hpp"

#include "nsbox/errors.hpp"

namespace nsbox::kernels {

bool avx2_available() {
#if defined(NSBOX_HAVE_AVX2_BUILD)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Impl resolve(Impl requested) {
    switch (requested) {
        case Impl::automatic: return avx2_available() ? Impl::avx2 : Impl::scalar;
        case Impl::scalar: return Impl::scalar;
        case Impl::avx2:
            if (!avx2_available())
                fail(Errc::unknown_model, "avx2 kernels not available on this machine");
            return Impl::avx2;
    }
    return Impl::scalar;
}

const char* impl_name(Impl resolved) {
    switch (resolved) {
        case Impl::automatic: return "auto";
        case Impl::scalar: return "scalar";
        case Impl::avx2: return "avx2";
    }
    return "scalar";
}

Impl impl_from_name(const std::string& name) {
    if (name == "auto")
        return Impl::automatic;
    if (name == "scalar")
        return Impl::scalar;
    if (name == "avx2")
        return Impl::avx2;
    fail(Errc::parse_error, "unknown kernel implementation '" + name + "'");
}

#if defined(NSBOX_HAVE_AVX2_BUILD)
#define NSBOX_DISPATCH(fn, ...)                                    \
    do {                                                           \
        if (resolve(impl) == Impl::avx2)                           \
            return fn##_avx2(__VA_ARGS__);                         \
        return fn##_scalar(__VA_ARGS__);                           \
    } while (0)
#else
#define NSBOX_DISPATCH(fn, ...)                                    \
    do {                                                           \
        (void)resolve(impl);                                       \
        return fn##_scalar(__VA_ARGS__);                           \
    } while (0)
#endif

PairCounts pr_box_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                         int x, int y, Impl impl, std::uint8_t* cells) {
    NSBOX_DISPATCH(pr_box_counts, seed, round0, n, x, y, cells);
}

CoinCounts coin_game_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                            Impl impl, std::uint8_t* cells) {
    NSBOX_DISPATCH(coin_game_counts, seed, round0, n, cells);
}

Exam1Counts exam1_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                         Impl impl, std::uint8_t* cells) {
    NSBOX_DISPATCH(exam1_counts, seed, round0, n, cells);
}

PairCounts toner_bacon_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              const Vec3& a_hat, const Vec3& b_hat, Impl impl,
                              std::uint8_t* cells) {
    NSBOX_DISPATCH(toner_bacon_counts, seed, round0, n, a_hat, b_hat, cells);
}

PairCounts cgmp_counts(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                       const Vec3& a_hat, const Vec3& b_hat, Impl impl,
                       std::uint8_t* cells) {
    NSBOX_DISPATCH(cgmp_counts, seed, round0, n, a_hat, b_hat, cells);
}

ChshGameCounts local_strategy_counts(std::uint64_t seed, std::uint64_t round0,
                                     std::uint64_t n, Impl impl, std::uint8_t* cells) {
    NSBOX_DISPATCH(local_strategy_counts, seed, round0, n, cells);
}

#undef NSBOX_DISPATCH

} // namespace nsbox::kernels

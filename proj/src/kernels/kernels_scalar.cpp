#include "kernels_common.hpp"
#include "kernels_internal.hpp"

namespace nsbox::kernels {

using namespace detail;

PairCounts pr_box_counts_scalar(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                                int x, int y, std::uint8_t* cells) {
    PairCounts out;
    out.rounds = n;
    for (std::uint64_t i = 0; i < n; ++i) {
        const PrRound r = pr_round(seed, round0 + i, x, y);
        const std::uint8_t cell = static_cast<std::uint8_t>(r.a * 2 + r.b);
        ++out.cell[cell];
        if (cells)
            cells[i] = cell;
    }
    return out;
}

CoinCounts coin_game_counts_scalar(std::uint64_t seed, std::uint64_t round0,
                                   std::uint64_t n, std::uint8_t* cells) {
    CoinCounts out;
    out.rounds = n;
    for (std::uint64_t i = 0; i < n; ++i) {
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

Exam1Counts exam1_counts_scalar(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                                std::uint8_t* cells) {
    Exam1Counts out;
    out.rounds = n;
    for (std::uint64_t i = 0; i < n; ++i) {
        const Exam1Round r = exam1_round(seed, round0 + i);
        out.both_succeed += r.both_succeed;
        out.matching_inputs += r.x == r.y;
        if (cells)
            cells[i] = static_cast<std::uint8_t>(r.x << 2 | r.y << 1 | r.both_succeed);
    }
    return out;
}

PairCounts toner_bacon_counts_scalar(std::uint64_t seed, std::uint64_t round0,
                                     std::uint64_t n, const Vec3& a_hat, const Vec3& b_hat,
                                     std::uint8_t* cells) {
    PairCounts out;
    out.rounds = n;
    for (std::uint64_t i = 0; i < n; ++i) {
        const SimulationRound r = toner_bacon_round(seed, round0 + i, a_hat, b_hat);
        const std::uint8_t cell = static_cast<std::uint8_t>(r.alice_bit * 2 + r.bob_bit);
        ++out.cell[cell];
        if (cells)
            cells[i] = cell;
    }
    return out;
}

PairCounts cgmp_counts_scalar(std::uint64_t seed, std::uint64_t round0, std::uint64_t n,
                              const Vec3& a_hat, const Vec3& b_hat, std::uint8_t* cells) {
    PairCounts out;
    out.rounds = n;
    for (std::uint64_t i = 0; i < n; ++i) {
        const SimulationRound r = cgmp_round(seed, round0 + i, a_hat, b_hat);
        const std::uint8_t cell = static_cast<std::uint8_t>(r.alice_bit * 2 + r.bob_bit);
        ++out.cell[cell];
        if (cells)
            cells[i] = cell;
    }
    return out;
}

ChshGameCounts local_strategy_counts_scalar(std::uint64_t seed, std::uint64_t round0,
                                            std::uint64_t n, std::uint8_t* cells) {
    ChshGameCounts out;
    out.rounds = n;
    for (std::uint64_t i = 0; i < n; ++i) {
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

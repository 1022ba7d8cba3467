#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nsbox/nscrypto.hpp"
#include "nsbox/quantum.hpp"
#include "nsbox/rng.hpp"
#include "nsbox/sim.hpp"

using namespace nsbox;
using namespace nsbox::sim;

namespace {

double correlator_of(const kernels::PairCounts& c) {
    const double n = static_cast<double>(c.rounds);
    return (static_cast<double>(c.cell[0]) + c.cell[3] - c.cell[1] - c.cell[2]) / n;
}

PairOracle singlet_oracle() {
    return [](const Vec3& a, const Vec3& b) {
        return quantum::singlet_correlation(quantum::make_direction(a),
                                            quantum::make_direction(b));
    };
}

} // namespace

TEST_CASE("pr_box_round honors a xor b = x.y") {
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const auto [a11, b11] = pr_box_round(3, i, 1, 1);
        CHECK((a11 ^ b11) == 1);
        const auto [a00, b00] = pr_box_round(3, i, 0, 0);
        CHECK(a00 == b00);
    }
}

TEST_CASE("pr box output is unbiased at fixed inputs") {
    const auto counts = kernels::pr_box_counts(17, 0, 100'000, 1, 0,
                                               kernels::Impl::automatic);
    const double p0 = static_cast<double>(counts.cell[0] + counts.cell[1]) / 100'000.0;
    CHECK(std::abs(p0 - 0.5) < 4.0 * std::sqrt(0.25 / 100'000.0));
}

TEST_CASE("coin game: the bar-story pattern never breaks") {
    RunOptions opts;
    opts.seed = 2024;
    const CoinGameResult r = coin_game(200'000, opts);
    CHECK(r.counts.pattern_violations == 0);
    CHECK(r.pattern_ok);
    CHECK(r.report.pass); // per-player heads at 50% within 4 sigma
    CHECK(r.empirical_mark == 4.0);
}

TEST_CASE("coin game transcript is deterministic and pattern-consistent") {
    const Transcript t1 = bit_model_transcript(Model::coin_game, 500, 7);
    const Transcript t2 = bit_model_transcript(Model::coin_game, 500, 7);
    std::ostringstream s1, s2;
    write_transcript_jsonl(s1, t1);
    write_transcript_jsonl(s2, t2);
    CHECK(s1.str() == s2.str());
    for (const RoundRecord& rec : t1.rounds) {
        if (rec.x == 1 && rec.y == 1)
            CHECK(rec.a != rec.b); // both left hands: opposite results
        else
            CHECK(rec.a == rec.b); // at least one right hand: equal results
    }
}

TEST_CASE("single-round transcript reruns identically") {
    const Transcript t1 = bit_model_transcript(Model::coin_game, 1, 99);
    const Transcript t2 = bit_model_transcript(Model::coin_game, 1, 99);
    REQUIRE(t1.rounds.size() == 1);
    CHECK(t1.rounds[0].a == t2.rounds[0].a);
    CHECK(t1.rounds[0].shared_digest == t2.rounds[0].shared_digest);
}

TEST_CASE("exam1: own-input strategy succeeds half the time") {
    RunOptions opts;
    opts.seed = 5;
    const Exam1Result r = exam1_guess_game(400'000, opts);
    CHECK(r.report.pass);
    CHECK(std::abs(r.success_frequency - 0.5) < 4.0 * std::sqrt(0.25 / 400'000.0));
    // Matching inputs succeed with certainty under the strategy.
    CHECK(r.counts.both_succeed == r.counts.matching_inputs);
}

TEST_CASE("exam1 adversarial baseline: independent guessing wins 1/4") {
    // Both players guess independent uniform bits instead.
    std::uint64_t wins = 0;
    const std::uint64_t n = 200'000;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto wi = rng::philox_block(12, i, rng::kStreamInputs, 0);
        const auto wg = rng::philox_block(12, i, rng::kStreamGeneric, 0);
        const auto x = wi[0] & 1u, y = wi[1] & 1u;
        const auto ga = wg[0] & 1u, gb = wg[1] & 1u; // guesses of y and x
        wins += (ga == y && gb == x) ? 1 : 0;
    }
    const double f = static_cast<double>(wins) / static_cast<double>(n);
    CHECK(std::abs(f - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(n)));
}

TEST_CASE("toner-bacon reproduces the singlet correlator") {
    const std::uint64_t n = 200'000;
    const double se = 4.0 / std::sqrt(static_cast<double>(n));

    const Vec3 z{0, 0, 1};
    const auto aligned = kernels::toner_bacon_counts(21, 0, n, z, z,
                                                     kernels::Impl::automatic);
    CHECK(std::abs(correlator_of(aligned) - (-1.0)) < se);

    const Vec3 x{1, 0, 0};
    const auto ortho = kernels::toner_bacon_counts(22, 0, n, z, x,
                                                   kernels::Impl::automatic);
    CHECK(std::abs(correlator_of(ortho)) < se);
}

TEST_CASE("toner-bacon communicates exactly one bit per round") {
    const DirectionPair pair{{0.6, 0.0, 0.8}, {0, 0, 1}};
    const Transcript t = entanglement_transcript(Model::toner_bacon, pair, 200, 3);
    for (const RoundRecord& rec : t.rounds) {
        CHECK(rec.bits_communicated == 1);
        CHECK(rec.prbox_uses == 0);
    }
    CHECK(t.totals.bits_communicated == 200);
}

TEST_CASE("single-PR-box model: no communication, one PR use, singlet stats") {
    const DirectionPair pair{{0, 0, 1}, {0, 0, 1}};
    const Transcript t = entanglement_transcript(Model::prbox_singlet, pair, 200, 4);
    for (const RoundRecord& rec : t.rounds) {
        CHECK(rec.bits_communicated == 0);
        CHECK(rec.prbox_uses == 1);
    }

    const std::uint64_t n = 200'000;
    const auto counts = kernels::cgmp_counts(23, 0, n, pair.alice, pair.bob,
                                             kernels::Impl::automatic);
    CHECK(std::abs(correlator_of(counts) - (-1.0)) < 4.0 / std::sqrt(static_cast<double>(n)));
    // Marginals stay unbiased.
    const double pa = static_cast<double>(counts.cell[0] + counts.cell[1]) /
                      static_cast<double>(n);
    CHECK(std::abs(pa - 0.5) < 4.0 * std::sqrt(0.25 / static_cast<double>(n)));
}

TEST_CASE("estimate: pr-box against its exact table passes at 4 sigma") {
    RunOptions opts;
    opts.seed = 31;
    const EstimateResult r = estimate_pr_box(100'000, opts);
    CHECK(r.report.pass);
    REQUIRE(r.empirical.has_value());
    CHECK(is_no_signaling(*r.empirical, 0.05).no_signaling);
    CHECK(r.totals.prbox_uses == 400'000);
}

TEST_CASE("estimate: toner-bacon against the singlet oracle passes at 4 sigma") {
    RunOptions opts;
    opts.seed = 32;
    const auto pairs = random_direction_pairs(32, 5);
    const EstimateResult r = estimate_directions(Model::toner_bacon, pairs, 100'000, opts,
                                                 singlet_oracle());
    CHECK(r.report.pass);
    CHECK(r.totals.bits_communicated == 500'000);
}

TEST_CASE("estimate: single-PR-box model passes at 4 sigma") {
    RunOptions opts;
    opts.seed = 33;
    const auto pairs = random_direction_pairs(33, 5);
    const EstimateResult r = estimate_directions(Model::prbox_singlet, pairs, 100'000,
                                                 opts, singlet_oracle());
    CHECK(r.report.pass);
    CHECK(r.totals.prbox_uses == 500'000);
}

TEST_CASE("statistical power: tiny N with a razor threshold fails") {
    RunOptions opts;
    opts.seed = 34;
    opts.sigma = 0.1;
    const auto pairs = random_direction_pairs(34, 3);
    const EstimateResult r = estimate_directions(Model::toner_bacon, pairs, 10, opts,
                                                 singlet_oracle());
    CHECK_FALSE(r.report.pass);
}

TEST_CASE("worker count does not change any result") {
    RunOptions one;
    one.seed = 77;
    one.workers = 1;
    RunOptions four = one;
    four.workers = 4;

    const CoinGameResult c1 = coin_game(50'000, one);
    const CoinGameResult c4 = coin_game(50'000, four);
    CHECK(c1.counts.heads == c4.counts.heads);
    CHECK(c1.counts.setting_rounds == c4.counts.setting_rounds);
    CHECK(c1.empirical_mark == c4.empirical_mark);

    const auto pairs = random_direction_pairs(77, 2);
    const EstimateResult e1 = estimate_directions(Model::toner_bacon, pairs, 30'000, one,
                                                  singlet_oracle());
    const EstimateResult e4 = estimate_directions(Model::toner_bacon, pairs, 30'000, four,
                                                  singlet_oracle());
    for (std::size_t k = 0; k < e1.per_setting.size(); ++k)
        CHECK(e1.per_setting[k].cell == e4.per_setting[k].cell);
    CHECK(stats::report_to_json(e1.report).dump() == stats::report_to_json(e4.report).dump());
}

TEST_CASE("kernel choice does not change any result") {
    if (!kernels::avx2_available())
        return;
    RunOptions scalar;
    scalar.seed = 88;
    scalar.impl = kernels::Impl::scalar;
    RunOptions avx2 = scalar;
    avx2.impl = kernels::Impl::avx2;
    const auto pairs = random_direction_pairs(88, 2);
    const EstimateResult a = estimate_directions(Model::prbox_singlet, pairs, 30'000,
                                                 scalar, singlet_oracle());
    const EstimateResult b = estimate_directions(Model::prbox_singlet, pairs, 30'000,
                                                 avx2, singlet_oracle());
    for (std::size_t k = 0; k < a.per_setting.size(); ++k)
        CHECK(a.per_setting[k].cell == b.per_setting[k].cell);
}

TEST_CASE("local baseline stays at the local bound over 100 seeds") {
    double mean = 0.0;
    double var = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        RunOptions opts;
        opts.seed = 1000 + static_cast<std::uint64_t>(s);
        const LocalBaselineResult r = local_baseline(40'000, opts);
        mean += r.empirical_mark;
        var += r.mark_stderr * r.mark_stderr;
    }
    mean /= seeds;
    const double se = std::sqrt(var) / seeds;
    CHECK(mean <= 3.0 + 4.0 * se);
    CHECK(mean >= 3.0 - 4.0 * se); // the chosen mixture sits exactly at the bound
}

TEST_CASE("sampled PR rounds match the exact table within 4 standard errors") {
    RunOptions opts;
    opts.seed = 606;
    opts.workers = 2;
    const Correlation truth = pr_box().to_float();
    const SampleCounts counts = sample_box(truth, 1'000'000, opts.seed, opts);
    const EmpiricalCorrelation emp = from_samples(counts);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const std::uint64_t n = emp.setting_counts[static_cast<std::size_t>(x) * 2 + y];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double target = truth.value(x, y, a, b);
                    const double se = stats::binomial_stderr(target, n);
                    CHECK(std::abs(emp.corr.value(x, y, a, b) - target) < 4.0 * se);
                }
        }
}

TEST_CASE("single-PR-box marginals are unbiased over 20 random pairs") {
    const auto pairs = random_direction_pairs(607, 20);
    const std::uint64_t n = 50'000;
    const double bound = 4.0 * std::sqrt(0.25 / static_cast<double>(n));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto c = kernels::cgmp_counts(608, k * n, n, pairs[k].alice, pairs[k].bob,
                                            kernels::Impl::automatic);
        const double pa = static_cast<double>(c.cell[0] + c.cell[1]) / static_cast<double>(n);
        const double pb = static_cast<double>(c.cell[0] + c.cell[2]) / static_cast<double>(n);
        CHECK(std::abs(pa - 0.5) < bound);
        CHECK(std::abs(pb - 0.5) < bound);
    }
}

TEST_CASE("stat reports serialize to CSV with a header") {
    RunOptions opts;
    opts.seed = 609;
    const Exam1Result r = exam1_guess_game(5000, opts);
    std::ostringstream out;
    stats::report_to_csv(out, r.report);
    CHECK(out.str().rfind("setting,cell,rounds,count,empirical,target,stderr,z\n", 0) == 0);
}

TEST_CASE("from_samples converges on a known box (95% of 100 seeds)") {
    const Correlation truth = crypto::isotropic_f(0.3);
    const std::uint64_t n = 1'000'000;
    const double bound = 5.0 * std::sqrt(std::log(static_cast<double>(n)) /
                                         static_cast<double>(n));
    int ok = 0;
    for (int s = 0; s < 100; ++s) {
        RunOptions opts;
        opts.seed = 5000 + static_cast<std::uint64_t>(s);
        opts.workers = 2;
        const SampleCounts counts = sample_box(truth, n, opts.seed, opts);
        const EmpiricalCorrelation emp = from_samples(counts);
        double max_dev = 0.0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        max_dev = std::max(max_dev,
                                           std::abs(emp.corr.value(x, y, a, b) -
                                                    truth.value(x, y, a, b)));
        ok += max_dev < bound;
    }
    CHECK(ok >= 95);
}

TEST_CASE("model names round trip") {
    CHECK(model_from_name("toner-bacon") == Model::toner_bacon);
    CHECK(model_from_name(model_name(Model::prbox_singlet)) == Model::prbox_singlet);
    CHECK_THROWS_WITH_AS(model_from_name("psychic"), doctest::Contains("UnknownModel"),
                         Error);
}

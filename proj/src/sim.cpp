#include "nsbox/sim.hpp"

#include <cmath>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "kernels/kernels_common.hpp"

namespace nsbox::sim {

using kernels::detail::coin_round;
using kernels::detail::exam1_round;
using kernels::detail::pr_round;

Model model_from_name(const std::string& name) {
    if (name == "pr-box")
        return Model::pr_box;
    if (name == "coin-game")
        return Model::coin_game;
    if (name == "exam1")
        return Model::exam1;
    if (name == "toner-bacon")
        return Model::toner_bacon;
    if (name == "prbox-singlet")
        return Model::prbox_singlet;
    if (name == "local-baseline")
        return Model::local_baseline;
    fail(Errc::unknown_model, "unknown model '" + name + "'");
}

const char* model_name(Model m) {
    switch (m) {
        case Model::pr_box: return "pr-box";
        case Model::coin_game: return "coin-game";
        case Model::exam1: return "exam1";
        case Model::toner_bacon: return "toner-bacon";
        case Model::prbox_singlet: return "prbox-singlet";
        case Model::local_baseline: return "local-baseline";
    }
    return "unknown";
}

namespace {

void merge(kernels::PairCounts& into, const kernels::PairCounts& part) {
    into.rounds += part.rounds;
    for (int i = 0; i < 4; ++i)
        into.cell[i] += part.cell[i];
}

void merge(kernels::CoinCounts& into, const kernels::CoinCounts& part) {
    into.rounds += part.rounds;
    into.pattern_violations += part.pattern_violations;
    for (int i = 0; i < 2; ++i)
        into.heads[i] += part.heads[i];
    for (int i = 0; i < 4; ++i) {
        into.setting_rounds[i] += part.setting_rounds[i];
        into.setting_success[i] += part.setting_success[i];
    }
}

void merge(kernels::Exam1Counts& into, const kernels::Exam1Counts& part) {
    into.rounds += part.rounds;
    into.both_succeed += part.both_succeed;
    into.matching_inputs += part.matching_inputs;
}

void merge(kernels::ChshGameCounts& into, const kernels::ChshGameCounts& part) {
    into.rounds += part.rounds;
    for (int i = 0; i < 4; ++i) {
        into.setting_rounds[i] += part.setting_rounds[i];
        into.setting_success[i] += part.setting_success[i];
    }
}

// Contiguous worker ranges; per-round results depend only on the round index
// and counts are integers, so any worker split yields identical totals.
template <typename Counts, typename Fn>
Counts run_parallel(std::uint64_t n, int workers, const Fn& chunk) {
    workers = std::max(1, workers);
    if (workers == 1 || n < 8192)
        return chunk(std::uint64_t(0), n);

    std::vector<Counts> parts(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::uint64_t per = n / workers;
    const std::uint64_t extra = n % workers;
    std::uint64_t begin = 0;
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t len = per + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
        threads.emplace_back(
            [&parts, &chunk, w, begin, len] { parts[w] = chunk(begin, len); });
        begin += len;
    }
    for (auto& t : threads)
        t.join();
    Counts total{};
    for (const Counts& p : parts)
        merge(total, p);
    return total;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t lambda_digest(std::uint64_t seed, std::uint64_t round) {
    const auto l1 = rng::unit_vector(seed, round, rng::kStreamLambda1);
    const auto l2 = rng::unit_vector(seed, round, rng::kStreamLambda2);
    std::uint64_t h = fnv1a64(l1.data(), sizeof(l1));
    return fnv1a64(l2.data(), sizeof(l2), h);
}

std::uint64_t block_digest(std::uint64_t seed, std::uint64_t round, std::uint32_t label) {
    const auto w = rng::philox_block(seed, round, label, 0);
    return fnv1a64(w.data(), sizeof(w));
}

std::string setting_name(int x, int y) {
    return "x" + std::to_string(x) + "y" + std::to_string(y);
}

std::string cell_name(int a, int b) {
    return "a" + std::to_string(a) + "b" + std::to_string(b);
}

} // namespace

void write_transcript_jsonl(std::ostream& out, const Transcript& t) {
    nlohmann::ordered_json meta;
    meta["schema"] = 1;
    meta["type"] = "transcript";
    meta["model"] = t.model;
    meta["seed"] = t.seed;
    meta["rounds"] = t.totals.rounds;
    meta["bits_communicated"] = t.totals.bits_communicated;
    meta["prbox_uses"] = t.totals.prbox_uses;
    out << meta.dump() << "\n";
    for (const RoundRecord& r : t.rounds) {
        nlohmann::ordered_json j;
        j["round"] = r.round;
        if (r.pair_index >= 0)
            j["pair"] = r.pair_index;
        j["x"] = r.x;
        j["y"] = r.y;
        j["a"] = r.a;
        j["b"] = r.b;
        j["bits"] = r.bits_communicated;
        j["pr_uses"] = r.prbox_uses;
        j["digest"] = r.shared_digest;
        out << j.dump() << "\n";
    }
}

std::pair<int, int> pr_box_round(std::uint64_t seed, std::uint64_t round, int x, int y) {
    if ((x & ~1) || (y & ~1))
        fail(Errc::index_out_of_range, "PR box inputs are bits");
    const auto r = pr_round(seed, round, x, y);
    return {r.a, r.b};
}

CoinGameResult coin_game(std::uint64_t rounds, const RunOptions& opts,
                         bool keep_transcript) {
    if (rounds < 1)
        fail(Errc::out_of_range, "coin game needs at least one round");

    CoinGameResult result;
    result.counts = run_parallel<kernels::CoinCounts>(
        rounds, opts.workers, [&](std::uint64_t begin, std::uint64_t n) {
            return kernels::coin_game_counts(opts.seed, begin, n, opts.impl);
        });

    result.pattern_ok = result.counts.pattern_violations == 0;

    std::vector<stats::CellStat> cells;
    cells.push_back(stats::cell_stat("marginal", "alice-heads", result.counts.heads[0],
                                     rounds, 0.5));
    cells.push_back(stats::cell_stat("marginal", "bob-heads", result.counts.heads[1],
                                     rounds, 0.5));
    result.report = stats::finish_report(std::move(cells), opts.sigma);

    double mark = 0.0;
    double var = 0.0;
    for (int s = 0; s < 4; ++s) {
        const std::uint64_t n = result.counts.setting_rounds[s];
        if (n == 0) {
            mark = std::nan("");
            break;
        }
        const double p =
            static_cast<double>(result.counts.setting_success[s]) / static_cast<double>(n);
        mark += p;
        const double se = stats::binomial_stderr(p, n);
        var += se * se;
    }
    result.empirical_mark = mark;
    result.mark_stderr = std::sqrt(var);

    if (keep_transcript)
        result.transcript = bit_model_transcript(Model::coin_game, rounds, opts.seed);
    return result;
}

Exam1Result exam1_guess_game(std::uint64_t rounds, const RunOptions& opts) {
    if (rounds < 1)
        fail(Errc::out_of_range, "exam1 needs at least one round");
    Exam1Result result;
    result.counts = run_parallel<kernels::Exam1Counts>(
        rounds, opts.workers, [&](std::uint64_t begin, std::uint64_t n) {
            return kernels::exam1_counts(opts.seed, begin, n, opts.impl);
        });
    result.success_frequency =
        static_cast<double>(result.counts.both_succeed) / static_cast<double>(rounds);
    std::vector<stats::CellStat> cells;
    cells.push_back(stats::cell_stat("exam1", "both-succeed", result.counts.both_succeed,
                                     rounds, 0.5));
    result.report = stats::finish_report(std::move(cells), opts.sigma);
    return result;
}

std::vector<DirectionPair> random_direction_pairs(std::uint64_t seed, int count) {
    std::vector<DirectionPair> pairs;
    pairs.reserve(count);
    for (int i = 0; i < count; ++i) {
        const auto a = rng::unit_vector(seed, static_cast<std::uint64_t>(2 * i),
                                        rng::kStreamDirections);
        const auto b = rng::unit_vector(seed, static_cast<std::uint64_t>(2 * i + 1),
                                        rng::kStreamDirections);
        pairs.push_back({Vec3{a[0], a[1], a[2]}, Vec3{b[0], b[1], b[2]}});
    }
    return pairs;
}

EstimateResult estimate_directions(Model model, std::span<const DirectionPair> pairs,
                                   std::uint64_t rounds_per_setting,
                                   const RunOptions& opts, const PairOracle& oracle) {
    if (model != Model::toner_bacon && model != Model::prbox_singlet)
        fail(Errc::unknown_model, "direction estimates need an entanglement model");
    if (rounds_per_setting < 1)
        fail(Errc::out_of_range, "need at least one round per setting");

    EstimateResult result;
    std::vector<stats::CellStat> cells;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::uint64_t begin0 = k * rounds_per_setting;
        const DirectionPair& pair = pairs[k];
        const auto counts = run_parallel<kernels::PairCounts>(
            rounds_per_setting, opts.workers, [&](std::uint64_t begin, std::uint64_t n) {
                return model == Model::toner_bacon
                           ? kernels::toner_bacon_counts(opts.seed, begin0 + begin, n,
                                                         pair.alice, pair.bob, opts.impl)
                           : kernels::cgmp_counts(opts.seed, begin0 + begin, n,
                                                  pair.alice, pair.bob, opts.impl);
            });
        const auto target = oracle(pair.alice, pair.bob);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                cells.push_back(stats::cell_stat("pair" + std::to_string(k),
                                                 cell_name(a, b), counts.cell[a * 2 + b],
                                                 rounds_per_setting, target[a * 2 + b]));
        result.per_setting.push_back(counts);
    }
    result.report = stats::finish_report(std::move(cells), opts.sigma);

    const std::uint64_t total = rounds_per_setting * pairs.size();
    result.totals.rounds = total;
    result.totals.bits_communicated = model == Model::toner_bacon ? total : 0;
    result.totals.prbox_uses = model == Model::prbox_singlet ? total : 0;
    return result;
}

EstimateResult estimate_pr_box(std::uint64_t rounds_per_setting, const RunOptions& opts) {
    if (rounds_per_setting < 1)
        fail(Errc::out_of_range, "need at least one round per setting");

    EstimateResult result;
    std::vector<stats::CellStat> cells;
    SampleCounts samples = SampleCounts::zero(Scenario::binary());
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const std::uint64_t begin0 = static_cast<std::uint64_t>(x * 2 + y) *
                                         rounds_per_setting;
            const auto counts = run_parallel<kernels::PairCounts>(
                rounds_per_setting, opts.workers,
                [&](std::uint64_t begin, std::uint64_t n) {
                    return kernels::pr_box_counts(opts.seed, begin0 + begin, n, x, y,
                                                  opts.impl);
                });
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double target = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
                    cells.push_back(stats::cell_stat(setting_name(x, y), cell_name(a, b),
                                                     counts.cell[a * 2 + b],
                                                     rounds_per_setting, target));
                    samples.add(x, y, a, b, counts.cell[a * 2 + b]);
                }
            result.per_setting.push_back(counts);
        }
    result.report = stats::finish_report(std::move(cells), opts.sigma);
    result.empirical = from_samples(samples).corr;
    result.totals.rounds = 4 * rounds_per_setting;
    result.totals.prbox_uses = result.totals.rounds;
    return result;
}

LocalBaselineResult local_baseline(std::uint64_t rounds, const RunOptions& opts) {
    if (rounds < 1)
        fail(Errc::out_of_range, "baseline needs at least one round");
    LocalBaselineResult result;
    result.counts = run_parallel<kernels::ChshGameCounts>(
        rounds, opts.workers, [&](std::uint64_t begin, std::uint64_t n) {
            return kernels::local_strategy_counts(opts.seed, begin, n, opts.impl);
        });
    double mark = 0.0;
    double var = 0.0;
    for (int s = 0; s < 4; ++s) {
        const std::uint64_t n = result.counts.setting_rounds[s];
        if (n == 0) {
            mark = std::nan("");
            break;
        }
        const double p = static_cast<double>(result.counts.setting_success[s]) /
                         static_cast<double>(n);
        mark += p;
        const double se = stats::binomial_stderr(p, n);
        var += se * se;
    }
    result.empirical_mark = mark;
    result.mark_stderr = std::sqrt(var);
    return result;
}

Transcript entanglement_transcript(Model model, const DirectionPair& pair,
                                   std::uint64_t rounds, std::uint64_t seed) {
    if (model != Model::toner_bacon && model != Model::prbox_singlet)
        fail(Errc::unknown_model, "transcripts for direction models only here");
    Transcript t;
    t.seed = seed;
    t.model = model_name(model);
    t.rounds.reserve(rounds);
    for (std::uint64_t i = 0; i < rounds; ++i) {
        const auto r = model == Model::toner_bacon
                           ? kernels::detail::toner_bacon_round(seed, i, pair.alice, pair.bob)
                           : kernels::detail::cgmp_round(seed, i, pair.alice, pair.bob);
        RoundRecord rec;
        rec.round = i;
        rec.pair_index = 0;
        rec.x = model == Model::prbox_singlet ? r.pr_x : 0;
        rec.y = model == Model::prbox_singlet ? r.pr_y : 0;
        rec.a = r.alice_bit;
        rec.b = r.bob_bit;
        rec.bits_communicated = r.bits_communicated;
        rec.prbox_uses = r.prbox_uses;
        rec.shared_digest = lambda_digest(seed, i);
        t.rounds.push_back(rec);
        t.totals.bits_communicated += r.bits_communicated;
        t.totals.prbox_uses += r.prbox_uses;
    }
    t.totals.rounds = rounds;
    return t;
}

Transcript bit_model_transcript(Model model, std::uint64_t rounds, std::uint64_t seed,
                                int x, int y) {
    Transcript t;
    t.seed = seed;
    t.model = model_name(model);
    t.rounds.reserve(rounds);
    for (std::uint64_t i = 0; i < rounds; ++i) {
        RoundRecord rec;
        rec.round = i;
        switch (model) {
            case Model::coin_game: {
                const auto r = coin_round(seed, i);
                rec.x = r.x;
                rec.y = r.y;
                rec.a = r.a;
                rec.b = r.b;
                rec.prbox_uses = 1;
                rec.shared_digest = block_digest(seed, i, rng::kStreamPrBox);
                break;
            }
            case Model::pr_box: {
                const auto r = pr_round(seed, i, x, y);
                rec.x = x;
                rec.y = y;
                rec.a = r.a;
                rec.b = r.b;
                rec.prbox_uses = 1;
                rec.shared_digest = block_digest(seed, i, rng::kStreamPrBox);
                break;
            }
            case Model::exam1: {
                const auto r = exam1_round(seed, i);
                rec.x = r.x;
                rec.y = r.y;
                rec.a = r.x; // own-input guesses
                rec.b = r.y;
                rec.shared_digest = block_digest(seed, i, rng::kStreamInputs);
                break;
            }
            default:
                fail(Errc::unknown_model, "transcripts for bit models only here");
        }
        t.totals.bits_communicated += rec.bits_communicated;
        t.totals.prbox_uses += rec.prbox_uses;
        t.rounds.push_back(rec);
    }
    t.totals.rounds = rounds;
    return t;
}

SampleCounts sample_box(const Correlation& box, std::uint64_t rounds,
                        std::uint64_t seed, const RunOptions& opts) {
    const Scenario& sc = box.scenario();
    const int cells_per_setting = sc.na * sc.nb;

    // Per-setting cumulative distributions.
    std::vector<double> cdf(static_cast<std::size_t>(sc.nx) * sc.ny * cells_per_setting);
    for (int x = 0; x < sc.nx; ++x)
        for (int y = 0; y < sc.ny; ++y) {
            double acc = 0.0;
            for (int a = 0; a < sc.na; ++a)
                for (int b = 0; b < sc.nb; ++b) {
                    acc += box.value(x, y, a, b);
                    cdf[(static_cast<std::size_t>(x) * sc.ny + y) * cells_per_setting +
                        a * sc.nb + b] = acc;
                }
        }

    struct Counts {
        std::vector<std::uint64_t> cells;
    };
    auto chunk = [&](std::uint64_t begin, std::uint64_t n) {
        Counts c;
        c.cells.assign(sc.table_size(), 0);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t round = begin + i;
            const auto w = rng::philox_block(seed, round, rng::kStreamSampler, 0);
            const int x = static_cast<int>(w[0] % static_cast<std::uint32_t>(sc.nx));
            const int y = static_cast<int>(w[1] % static_cast<std::uint32_t>(sc.ny));
            const double u = rng::u01_from(w[2], w[3]);
            const std::size_t base =
                (static_cast<std::size_t>(x) * sc.ny + y) * cells_per_setting;
            int cell = cells_per_setting - 1;
            for (int k = 0; k < cells_per_setting; ++k) {
                if (u < cdf[base + k]) {
                    cell = k;
                    break;
                }
            }
            ++c.cells[sc.index(x, y, cell / sc.nb, cell % sc.nb)];
        }
        return c;
    };

    // Integer counts commute; contiguous split is worker-count independent.
    const int workers = std::max(1, opts.workers);
    Counts total;
    total.cells.assign(sc.table_size(), 0);
    if (workers == 1 || rounds < 8192) {
        total = chunk(0, rounds);
    } else {
        std::vector<Counts> parts(workers);
        std::vector<std::thread> threads;
        const std::uint64_t per = rounds / workers;
        const std::uint64_t extra = rounds % workers;
        std::uint64_t begin = 0;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t len = per + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
            threads.emplace_back([&parts, &chunk, w, begin, len] { parts[w] = chunk(begin, len); });
            begin += len;
        }
        for (auto& th : threads)
            th.join();
        for (const Counts& p : parts)
            for (std::size_t i = 0; i < total.cells.size(); ++i)
                total.cells[i] += p.cells[i];
    }

    SampleCounts out = SampleCounts::zero(sc);
    out.cells = std::move(total.cells);
    return out;
}

} // namespace nsbox::sim

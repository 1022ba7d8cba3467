// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nsbox/bell.hpp"
#include "nsbox/box_io.hpp"
#include "nsbox/nscrypto.hpp"
#include "nsbox/polytope.hpp"
#include "nsbox/quantum.hpp"
#include "nsbox/rng.hpp"
#include "nsbox/sim.hpp"
#include "nsbox/stats.hpp"
#include "nsbox/tripartite.hpp"

using namespace nsbox;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

Correlation random_ns_box(std::uint64_t seed, std::uint64_t index, long denom) {
    const auto& verts = ns_vertex_list();
    rng::RoundStream stream(seed, index, rng::kStreamGeneric);
    std::vector<long> raw(verts.size());
    long total = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        raw[i] = static_cast<long>(stream.next_u32() % denom);
        total += raw[i];
    }
    if (total == 0) {
        raw[7] = 1;
        total = 1;
    }
    std::vector<std::pair<Rational, Correlation>> parts;
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (raw[i] != 0)
            parts.emplace_back(rat(raw[i], total), verts[i].box);
    return mix(parts);
}

bool c1_local_bound(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto strategies = enumerate_deterministic(Scenario::binary());
    if (strategies.size() != 16) {
        detail = "expected 16 strategies";
        return false;
    }
    const LocalBoundResult r = local_bound(chsh_functional());
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    detail = "max mark " + rat_to_string(r.value) + " over 16 strategies in " +
             std::to_string(ms) + " ms";
    return r.value == 3 && ms < 1000;
}

bool c2_pr_maximum(std::string& detail) {
    const Rational m = evaluate(chsh_functional(), pr_box());
    detail = "CHSH(PR) = " + rat_to_string(m);
    return m == 4;
}

bool c3_tsirelson(std::string& detail) {
    const double target = 2.0 + std::sqrt(2.0);
    const auto opt = quantum::chsh_mark_for_settings(quantum::singlet_state(),
                                                     quantum::named_family("chsh-optimal"));
    if (std::abs(opt.mark - target) > 1e-9) {
        detail = "chsh-optimal mark off target";
        return false;
    }

    // 100 random Schmidt states x 100 restarts = 10^4 restarts total.
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        rng::RoundStream stream(301, static_cast<std::uint64_t>(s), rng::kStreamGeneric);
        quantum::SchmidtState state;
        state.theta = stream.next_u01() * 0.78539816339744831;
        state.singlet = (stream.next_u32() & 1u) != 0;
        quantum::SearchOptions so;
        so.restarts = 100;
        so.sweeps = 3;
        so.seed = 9000 + static_cast<std::uint64_t>(s);
        const auto r = quantum::max_chsh(state, so);
        worst = std::max(worst, r.mark);
        if (r.mark > target + 1e-6) {
            detail = "search exceeded the ceiling at theta = " + std::to_string(state.theta);
            return false;
        }
    }
    std::ostringstream os;
    os << "optimal-family mark " << opt.mark << "; search max over 10^4 restarts " << worst;
    detail = os.str();
    return true;
}

bool c4_isotropic_algebra(std::string& detail) {
    for (long num = 0; num <= 10; ++num) {
        const Rational p = rat(num, 10);
        if (evaluate(chsh_functional(), crypto::isotropic(p).box) != 3 + p) {
            detail = "mark != 3+p at p = " + rat_to_string(p);
            return false;
        }
        const bool local =
            std::holds_alternative<Decomposition>(is_local(crypto::isotropic(p).box));
        if (local != (num == 0)) {
            detail = "locality verdict wrong at p = " + rat_to_string(p);
            return false;
        }
    }
    const double p_q = std::sqrt(2.0) - 1.0;
    const double mark = evaluate_d(chsh_functional(), crypto::isotropic_f(p_q));
    if (std::abs(mark - (2.0 + std::sqrt(2.0))) > 1e-12) {
        detail = "quantum-realizability marker off";
        return false;
    }
    detail = "mark = 3+p on the 11-point grid; local iff p = 0; M(sqrt(2)-1) ok";
    return true;
}

bool c5_polytope_census(std::string& detail) {
    const auto& verts = ns_vertex_list();
    if (verts.size() != 24) {
        detail = "vertex count != 24";
        return false;
    }
    for (const auto& v : verts) {
        if (!verify_vertex(v.box)) {
            detail = "vertex " + std::to_string(v.index) + " failed verification";
            return false;
        }
    }
    std::vector<Correlation> boxes;
    for (const auto& v : verts)
        boxes.push_back(v.box);
    const int dim = affine_dimension(boxes);
    if (dim != 8) {
        detail = "affine dimension " + std::to_string(dim);
        return false;
    }
    for (int i = 0; i < 1000; ++i) {
        const Correlation box = random_ns_box(401, static_cast<std::uint64_t>(i), 64);
        const Decomposition d = decompose_ns(box);
        if (!(recompose(d) == box) || d.residual != 0) {
            detail = "nonzero residual at random box " + std::to_string(i);
            return false;
        }
    }
    detail = "24 verified vertices, dimension 8, 1000 exact reconstructions";
    return true;
}

bool c6_monogamy(std::string& detail) {
    const std::pair<Rational, Rational> grid[] = {
        {Rational(2), Rational(4)}, {rat(5, 2), rat(7, 2)}, {Rational(3), Rational(3)},
        {rat(7, 2), rat(5, 2)},     {Rational(4), Rational(2)},
    };
    for (const auto& [m, want] : grid) {
        const MonogamyResult r = monogamy_max(m);
        if (r.max_m_ac != want) {
            detail = "monogamy_max(" + rat_to_string(m) + ") = " + rat_to_string(r.max_m_ac);
            return false;
        }
        if (m > 3 && r.max_m_ac > 3) {
            detail = "AC violates although AB does";
            return false;
        }
    }
    const CloningFeasibility clone = cloning_feasible(Rational(4), Rational(4));
    if (clone.feasible || !clone.parity_leak || (*clone.parity_leak)[0] != 0 ||
        (*clone.parity_leak)[1] != 1) {
        detail = "double-PR demand not refused with the parity witness";
        return false;
    }
    detail = "max M_AC = min(4, 6 - M_AB) on the 5-point grid; cloning(4,4) infeasible";
    return true;
}

bool c7_simulation_fidelity(std::string& detail) {
    const std::uint64_t n = 1'000'000;
    const auto pairs = sim::random_direction_pairs(777, 20);
    const auto oracle = [](const Vec3& a, const Vec3& b) {
        return quantum::singlet_correlation(quantum::make_direction(a),
                                            quantum::make_direction(b));
    };
    sim::RunOptions opts;
    opts.seed = 778;
    opts.workers = 2;

    const auto tb = sim::estimate_directions(sim::Model::toner_bacon, pairs, n, opts, oracle);
    if (!tb.report.pass) {
        detail = "toner-bacon max |z| = " + std::to_string(tb.report.max_abs_z);
        return false;
    }
    if (tb.totals.bits_communicated != 20 * n || tb.totals.prbox_uses != 0) {
        detail = "toner-bacon resource accounting off";
        return false;
    }

    opts.seed = 779;
    const auto pr = sim::estimate_directions(sim::Model::prbox_singlet, pairs, n, opts, oracle);
    if (!pr.report.pass) {
        detail = "single-PR-box max |z| = " + std::to_string(pr.report.max_abs_z);
        return false;
    }
    if (pr.totals.bits_communicated != 0 || pr.totals.prbox_uses != 20 * n) {
        detail = "single-PR-box resource accounting off";
        return false;
    }
    std::ostringstream os;
    os << "20 pairs x 10^6 rounds per model; max |z| " << tb.report.max_abs_z << " and "
       << pr.report.max_abs_z;
    detail = os.str();
    return true;
}

bool c8_coin_game(std::string& detail) {
    sim::RunOptions opts;
    opts.seed = 808;
    opts.workers = 2;
    const sim::CoinGameResult r = sim::coin_game(1'000'000, opts);
    if (r.counts.pattern_violations != 0) {
        detail = "pattern violations: " + std::to_string(r.counts.pattern_violations);
        return false;
    }
    if (!r.report.pass) {
        detail = "player marginals off 50% beyond 4 sigma";
        return false;
    }
    if (std::abs(r.empirical_mark - 4.0) > 4.0 * std::max(r.mark_stderr, 1e-12)) {
        detail = "empirical mark " + std::to_string(r.empirical_mark);
        return false;
    }
    std::ostringstream os;
    os << "0 violations; heads z " << r.report.max_abs_z << "; mark " << r.empirical_mark;
    detail = os.str();
    return true;
}

bool c9_exam1(std::string& detail) {
    sim::RunOptions opts;
    opts.seed = 909;
    opts.workers = 2;
    const sim::Exam1Result r = sim::exam1_guess_game(1'000'000, opts);
    std::ostringstream os;
    os << "joint success " << r.success_frequency << " (z = " << r.report.max_abs_z << ")";
    detail = os.str();
    return r.report.pass;
}

bool c10_crypto(std::string& detail) {
    for (long num = 0; num <= 10; ++num) {
        const Rational p = rat(num, 10);
        const auto atk = crypto::eve_individual_attack(crypto::isotropic(p).box, Party::bob);
        if (atk.known_weight != (1 - p) / 2) {
            detail = "I(B;E) != (1-p)/2 at p = " + rat_to_string(p);
            return false;
        }
        const auto rep = crypto::info_disturbance_check(crypto::isotropic(p).box);
        if (rep.residual0 != 0 || rep.residual1 != 0) {
            detail = "info-disturbance residual nonzero at p = " + rat_to_string(p);
            return false;
        }
    }
    const auto crossing = crypto::advantage_crossing();
    if (!crossing) {
        detail = "no crossing found";
        return false;
    }
    std::ostringstream os;
    os << "I(B;E) exact on the grid; identity residuals 0; crossing = " << *crossing;
    detail = os.str();
    if (*crossing < 0.308 || *crossing > 0.328) {
        detail += " (OUTSIDE the published band [0.308, 0.328])";
        return false;
    }
    return true;
}

bool c11_protocol_comparison(std::string& detail) {
    const auto cmp = crypto::bb84_vs_chsh_comparison();
    std::ostringstream os;
    os << "BB84 mark " << cmp.mark_bb84 << "; CHSH-protocol mark " << cmp.mark_chsh_protocol;
    detail = os.str();
    return std::abs(cmp.mark_bb84 - 2.0) < 1e-12 &&
           std::abs(cmp.mark_chsh_protocol - (2.0 + std::sqrt(2.0))) < 1e-9;
}

bool c12_reproducibility(std::string& detail) {
    // Same seed, different worker counts and kernels: identical counts,
    // reports, and transcripts.
    sim::RunOptions a;
    a.seed = 1212;
    a.workers = 1;
    sim::RunOptions b = a;
    b.workers = 3;

    const auto coin1 = sim::coin_game(300'000, a);
    const auto coin3 = sim::coin_game(300'000, b);
    if (coin1.counts.heads != coin3.counts.heads ||
        coin1.counts.setting_success != coin3.counts.setting_success) {
        detail = "coin game counts differ across worker counts";
        return false;
    }

    const auto exam1 = sim::exam1_guess_game(300'000, a);
    const auto exam3 = sim::exam1_guess_game(300'000, b);
    if (exam1.counts.both_succeed != exam3.counts.both_succeed) {
        detail = "exam1 counts differ across worker counts";
        return false;
    }

    const auto pairs = sim::random_direction_pairs(1212, 4);
    const auto oracle = [](const Vec3& u, const Vec3& v) {
        return quantum::singlet_correlation(quantum::make_direction(u),
                                            quantum::make_direction(v));
    };
    const auto e1 = sim::estimate_directions(sim::Model::toner_bacon, pairs, 100'000, a, oracle);
    const auto e3 = sim::estimate_directions(sim::Model::toner_bacon, pairs, 100'000, b, oracle);
    if (stats::report_to_json(e1.report).dump() != stats::report_to_json(e3.report).dump()) {
        detail = "estimate reports differ across worker counts";
        return false;
    }

    std::ostringstream t1, t2;
    sim::write_transcript_jsonl(t1, sim::bit_model_transcript(sim::Model::coin_game, 5000, 77));
    sim::write_transcript_jsonl(t2, sim::bit_model_transcript(sim::Model::coin_game, 5000, 77));
    if (t1.str() != t2.str()) {
        detail = "transcripts differ across reruns";
        return false;
    }

    if (kernels::avx2_available()) {
        sim::RunOptions ks = a;
        ks.impl = kernels::Impl::scalar;
        sim::RunOptions kv = a;
        kv.impl = kernels::Impl::avx2;
        const auto s = sim::estimate_directions(sim::Model::prbox_singlet, pairs, 50'000, ks, oracle);
        const auto v = sim::estimate_directions(sim::Model::prbox_singlet, pairs, 50'000, kv, oracle);
        for (std::size_t k = 0; k < s.per_setting.size(); ++k)
            if (s.per_setting[k].cell != v.per_setting[k].cell) {
                detail = "scalar and avx2 kernels disagree";
                return false;
            }
        detail = "counts, reports, transcripts identical (workers 1 vs 3; scalar vs avx2)";
    } else {
        detail = "counts, reports, transcripts identical (workers 1 vs 3; scalar only)";
    }
    return true;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"C1 local-bound-by-enumeration", c1_local_bound},
        {"C2 pr-box-algebraic-maximum", c2_pr_maximum},
        {"C3 tsirelson-ceiling", c3_tsirelson},
        {"C4 isotropic-algebra", c4_isotropic_algebra},
        {"C5 polytope-census", c5_polytope_census},
        {"C6 monogamy-and-cloning", c6_monogamy},
        {"C7 simulation-fidelity", c7_simulation_fidelity},
        {"C8 coin-game", c8_coin_game},
        {"C9 exam1-guessing", c9_exam1},
        {"C10 crypto-attack-and-crossing", c10_crypto},
        {"C11 protocol-comparison", c11_protocol_comparison},
        {"C12 reproducibility", c12_reproducibility},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        std::printf("[%s] %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                    static_cast<long long>(ms), detail.empty() ? "" : " - ",
                    detail.c_str());
        failures += !ok;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}

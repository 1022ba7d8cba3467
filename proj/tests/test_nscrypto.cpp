#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nsbox/bell.hpp"
#include "nsbox/nscrypto.hpp"
#include "nsbox/rng.hpp"
#include "nsbox/simplex.hpp"
#include "nsbox/stats.hpp"

using namespace nsbox;
using namespace nsbox::crypto;

namespace {

Correlation random_local_box(std::uint64_t seed, std::uint64_t index) {
    rng::RoundStream stream(seed, index, rng::kStreamGeneric);
    std::vector<long> raw(16);
    long total = 0;
    for (int s = 0; s < 16; ++s) {
        raw[s] = static_cast<long>(stream.next_u32() % 32);
        total += raw[s];
    }
    if (total == 0) {
        raw[3] = 1;
        total = 1;
    }
    std::vector<std::pair<Rational, Correlation>> parts;
    for (int s = 0; s < 16; ++s)
        if (raw[s] != 0)
            parts.emplace_back(rat(raw[s], total),
                               strategy_box(Scenario::binary(),
                                            strategy_at(Scenario::binary(),
                                                        static_cast<std::uint64_t>(s))));
    return mix(parts);
}

} // namespace

TEST_CASE("isotropic endpoints") {
    CHECK(isotropic(Rational(1)).box == pr_box());
    CHECK(evaluate(chsh_functional(), isotropic(Rational(0)).box) == 3);
    CHECK_THROWS_WITH_AS(isotropic(rat(3, 2)), doctest::Contains("OutOfRange"), Error);
}

TEST_CASE("float isotropic at p = sqrt(2)-1 has mark 2 + sqrt(2)") {
    const double p = std::sqrt(2.0) - 1.0;
    const Correlation box = isotropic_f(p);
    const double mark = evaluate_d(chsh_functional(), box);
    CHECK(std::abs(mark - (2.0 + std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("sifting the PR box yields perfect agreement") {
    const SiftedData s = sift(pr_box());
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Rational agree = s.sifted.rat(x, y, 0, 0) + s.sifted.rat(x, y, 1, 1);
            CHECK(agree == 1);
        }
}

TEST_CASE("sifting uniform noise changes nothing") {
    const SiftedData s = sift(uniform_box(Scenario::binary()));
    CHECK(s.sifted == uniform_box(Scenario::binary()));
}

TEST_CASE("sifted isotropic error rate is (1-p)/4 per setting") {
    const Rational p = rat(2, 5);
    const SiftedData s = sift(isotropic(p).box);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const Rational err = s.sifted.rat(x, y, 0, 1) + s.sifted.rat(x, y, 1, 0);
            CHECK(err == (1 - p) / 4);
        }
}

TEST_CASE("sift is idempotent") {
    const SiftedData once = sift(isotropic(rat(1, 3)).box);
    const SiftedData twice = sift(once);
    CHECK(twice.sifted == once.sifted);
}

TEST_CASE("qber on the isotropic family") {
    CHECK(qber_exact(sift(isotropic(rat(1, 2)).box), 0) == rat(1, 8));
    CHECK(qber_exact(sift(isotropic(rat(1, 2)).box), 1) == rat(1, 8));
    CHECK(qber_exact(sift(isotropic(Rational(1)).box), 0) == 0);
    CHECK(qber_exact(sift(isotropic(Rational(0)).box), 1) == rat(1, 4));
}

TEST_CASE("mutual information endpoints") {
    CHECK(mutual_info_ab(sift(isotropic(Rational(1)).box)) == doctest::Approx(1.0));
    // QBER = 1/4: 1 - h(1/4).
    CHECK(mutual_info_ab(sift(isotropic(Rational(0)).box)) ==
          doctest::Approx(0.18872187554086717).epsilon(1e-12));
    // QBER = 1/2 via the anti-PR mixture.
    CHECK(mutual_info_ab(sift(isotropic(Rational(-1)).box)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // General-formula path agrees with the binary-symmetric closed form.
    const double q = rat_to_double(qber_exact(sift(isotropic(rat(2, 5)).box), 0));
    CHECK(mutual_info_ab(sift(isotropic(rat(2, 5)).box)) ==
          doctest::Approx(1.0 - stats::binary_entropy(q)).epsilon(1e-12));
}

TEST_CASE("binary entropy spot values") {
    CHECK(stats::binary_entropy(0.0) == 0.0);
    CHECK(stats::binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(stats::binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-14));
}

TEST_CASE("attack on the isotropic family: I(B;E) = (1-p)/2 exactly") {
    for (long num = 0; num <= 10; ++num) {
        const Rational p = rat(num, 10);
        const AttackDecomposition atk = eve_individual_attack(isotropic(p).box, Party::bob);
        CHECK(atk.known_weight == (1 - p) / 2);
        CHECK(recompose(atk.decomposition) == isotropic(p).box);
    }
}

TEST_CASE("attack on the PR box: Eve knows nothing") {
    const AttackDecomposition atk = eve_individual_attack(pr_box(), Party::bob);
    CHECK(atk.known_weight == 0);
    CHECK(atk.i_be_bits == doctest::Approx(0.0));
}

TEST_CASE("attack on uniform noise: Eve knows everything") {
    const AttackDecomposition atk =
        eve_individual_attack(uniform_box(Scenario::binary()), Party::bob);
    CHECK(atk.known_weight == 1);
    CHECK(atk.i_be_bits == doctest::Approx(1.0));
}

TEST_CASE("attack targeting Alice mirrors the rule") {
    const AttackDecomposition atk =
        eve_individual_attack(uniform_box(Scenario::binary()), Party::alice);
    CHECK(atk.known_weight == 1);
    CHECK(eve_individual_attack(pr_box(), Party::alice).known_weight == 0);
}

TEST_CASE("attack is at least as informed as any generating decomposition") {
    const auto& verts = ns_vertex_list();
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
        rng::RoundStream stream(61, trial, rng::kStreamGeneric);
        std::vector<long> raw(24);
        long total = 0;
        for (int v = 0; v < 24; ++v) {
            raw[v] = static_cast<long>(stream.next_u32() % 16);
            total += raw[v];
        }
        if (total == 0)
            continue;
        std::vector<std::pair<Rational, Correlation>> parts;
        Rational generating_known = 0;
        for (int v = 0; v < 24; ++v) {
            if (raw[v] == 0)
                continue;
            parts.emplace_back(rat(raw[v], total), verts[v].box);
            const bool known = !verts[v].nonlocal &&
                               verts[v].strategy.bob_map[0] == verts[v].strategy.bob_map[1];
            if (known)
                generating_known += rat(raw[v], total);
        }
        const Correlation box = mix(parts);
        const AttackDecomposition atk = eve_individual_attack(box, Party::bob);
        CHECK(atk.known_weight >= generating_known);
        CHECK(recompose(atk.decomposition) == box);
    }
}

TEST_CASE("attack optimality is certified by LP duality") {
    // Rebuild the attack LP from raw data and check the solver's dual prices
    // against it: y.A <= c componentwise and y.b equal to the optimum.
    const auto& verts = ns_vertex_list();
    for (long num : {0L, 3L, 5L, 10L}) {
        const Rational p = rat(num, 10);
        const Correlation box = isotropic(p).box;
        lp::Problem prob;
        prob.num_vars = verts.size();
        const auto& want = box.rat_table();
        for (std::size_t cell = 0; cell < want.size(); ++cell) {
            std::vector<Rational> row(prob.num_vars);
            for (std::size_t v = 0; v < verts.size(); ++v)
                row[v] = verts[v].box.rat_table()[cell];
            prob.add_row(std::move(row), want[cell]);
        }
        prob.add_row(std::vector<Rational>(prob.num_vars, Rational(1)), Rational(1));
        prob.objective.assign(prob.num_vars, 0);
        for (std::size_t v = 0; v < verts.size(); ++v)
            if (!verts[v].nonlocal &&
                verts[v].strategy.bob_map[0] == verts[v].strategy.bob_map[1])
                prob.objective[v] = -1;

        const lp::Solution sol = lp::solve(prob);
        REQUIRE(sol.status == lp::Status::optimal);
        CHECK(-sol.objective_value == (1 - p) / 2);
        for (std::size_t j = 0; j < prob.num_vars; ++j) {
            Rational col = 0;
            for (std::size_t i = 0; i < prob.rows.size(); ++i)
                col += sol.duals[i] * prob.rows[i][j];
            CHECK(col <= prob.objective[j]);
        }
        Rational yb = 0;
        for (std::size_t i = 0; i < prob.rows.size(); ++i)
            yb += sol.duals[i] * prob.rhs[i];
        CHECK(yb == sol.objective_value);
    }
}

TEST_CASE("key rate reports stay inside their ranges") {
    for (long num = 0; num <= 10; ++num) {
        const KeyRateReport row = key_rate_at(rat(num, 10));
        CHECK(row.i_ab >= 0.0);
        CHECK(row.i_ab <= 1.0);
        CHECK(row.i_be >= 0.0);
        CHECK(row.i_be <= 1.0);
        CHECK(row.qber0 >= 0.0);
        CHECK(row.qber0 <= 0.5);
        CHECK(row.qber1 >= 0.0);
        CHECK(row.qber1 <= 0.5);
    }
}

TEST_CASE("local boxes admit a fully local optimal attack") {
    for (std::uint64_t i = 0; i < 40; ++i) {
        const Correlation box = random_local_box(62, i);
        const AttackDecomposition atk = eve_individual_attack(box, Party::bob);
        CHECK(atk.decomposition.nonlocal_weight == 0);
    }
}

TEST_CASE("information gain versus disturbance on the isotropic family") {
    for (long num : {0L, 3L, 5L, 8L, 10L}) {
        const Rational p = rat(num, 10);
        const InfoDisturbanceReport rep = info_disturbance_check(isotropic(p).box);
        CHECK(rep.residual0 == 0);
        CHECK(rep.residual1 == 0);
        CHECK(rep.i0 == (1 - p) / 2);
        CHECK(rep.i1 == (1 - p) / 2);
        CHECK(rep.qber0 == (1 - p) / 4);
    }
}

TEST_CASE("info-disturbance spot values from the examples") {
    const InfoDisturbanceReport half = info_disturbance_check(isotropic(rat(1, 2)).box);
    CHECK(half.i0 == rat(1, 4));
    CHECK(2 * half.qber1 == rat(1, 4));
    const InfoDisturbanceReport one = info_disturbance_check(isotropic(Rational(1)).box);
    CHECK(one.i0 == 0);
    CHECK(one.qber1 == 0);
    const InfoDisturbanceReport zero = info_disturbance_check(isotropic(Rational(0)).box);
    CHECK(zero.i0 == rat(1, 2));
    CHECK(2 * zero.qber1 == rat(1, 2));
}

TEST_CASE("key rates: endpoints and monotonicity") {
    std::vector<Rational> grid;
    for (long num = 0; num <= 10; ++num)
        grid.push_back(rat(num, 10));
    const KeyAdvantageCurve curve = key_advantage_curve(grid);
    REQUIRE(curve.rows.size() == 11);

    CHECK(curve.rows.back().advantage == doctest::Approx(1.0));
    CHECK(curve.rows.front().advantage ==
          doctest::Approx(0.18872187554086717 - 0.5).epsilon(1e-12));

    int sign_changes = 0;
    for (std::size_t i = 1; i < curve.rows.size(); ++i) {
        CHECK(curve.rows[i].i_ab >= curve.rows[i - 1].i_ab - 1e-14);
        CHECK(curve.rows[i].i_be <= curve.rows[i - 1].i_be + 1e-14);
        if ((curve.rows[i - 1].advantage < 0) != (curve.rows[i].advantage < 0))
            ++sign_changes;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("the advantage crossing lands in the published band") {
    const auto crossing = advantage_crossing();
    REQUIRE(crossing.has_value());
    CHECK(*crossing >= 0.308);
    CHECK(*crossing <= 0.328);
}

TEST_CASE("crossing search respects the requested window") {
    const auto none = advantage_crossing(0.9, 1.0);
    CHECK_FALSE(none.has_value());
}

TEST_CASE("csv output carries the expected columns") {
    KeyAdvantageCurve curve = key_advantage_curve({rat(1, 2)});
    std::ostringstream out;
    curve_to_csv(out, curve);
    CHECK(out.str().rfind("p,qber,i_ab,i_be,advantage\n", 0) == 0);
}

TEST_CASE("BB84 versus CHSH protocol at the correlation level") {
    const ProtocolComparison cmp = bb84_vs_chsh_comparison();
    CHECK(cmp.mark_bb84 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(cmp.mark_chsh_protocol - (2.0 + std::sqrt(2.0))) < 1e-9);
    CHECK(cmp.bb84.advantage <= 0.0);
    CHECK_FALSE(cmp.bb84_secure);
    CHECK(cmp.chsh_protocol.advantage > 0.0);
    CHECK(cmp.chsh_protocol_secure);
    const auto j = comparison_to_json(cmp);
    CHECK(j["bb84"]["violates_bell"] == false);
    CHECK(j["chsh_protocol"]["violates_bell"] == true);
}

TEST_CASE("key analysis rejects p outside [0,1]") {
    CHECK_THROWS_AS(key_advantage_curve({rat(-1, 10)}), Error);
}

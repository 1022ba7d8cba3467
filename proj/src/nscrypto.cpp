#include "nsbox/nscrypto.hpp"

#include <cmath>
#include <ostream>

#include "nsbox/quantum.hpp"
#include "nsbox/simplex.hpp"
#include "nsbox/stats.hpp"

namespace nsbox::crypto {

IsotropicBox isotropic(const Rational& p) {
    if (p < -1 || p > 1)
        fail(Errc::out_of_range, "isotropic parameter must lie in [-1, 1]");
    const Scenario sc = Scenario::binary();
    const Rational w_pr = (1 + p) / 2;
    const Rational w_noise = (1 - p) / 2;
    std::vector<Rational> t(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const bool on = (a ^ b) == (x & y);
                    t[sc.index(x, y, a, b)] =
                        (on ? w_pr * rat(1, 2) : Rational(0)) + w_noise * rat(1, 4);
                }
    return {p, Correlation::validate(sc, std::move(t))};
}

Correlation isotropic_f(double p) {
    if (p < -1.0 || p > 1.0)
        fail(Errc::out_of_range, "isotropic parameter must lie in [-1, 1]");
    const Scenario sc = Scenario::binary();
    std::vector<double> t(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const bool on = (a ^ b) == (x & y);
                    t[sc.index(x, y, a, b)] =
                        (on ? (1.0 + p) / 4.0 : 0.0) + (1.0 - p) / 8.0;
                }
    return Correlation::validate(sc, std::move(t), 1e-12);
}

SiftedData sift(const Correlation& corr) {
    if (!corr.scenario().is_binary())
        fail(Errc::unsupported_scenario, "sift is defined for the binary scenario");
    const Scenario sc = Scenario::binary();
    if (corr.mode() == NumericMode::rational) {
        std::vector<Rational> t(16);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int bp = 0; bp < 2; ++bp)
                        t[sc.index(x, y, a, bp)] = corr.rat(x, y, a, bp ^ (x & y));
        return {Correlation::validate(sc, std::move(t))};
    }
    std::vector<double> t(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int bp = 0; bp < 2; ++bp)
                    t[sc.index(x, y, a, bp)] = corr.value(x, y, a, bp ^ (x & y));
    return {Correlation::validate(sc, std::move(t), 1e-12)};
}

SiftedData sift(const SiftedData& data) {
    return data;
}

Rational qber_exact(const SiftedData& data, int x) {
    if (data.sifted.mode() != NumericMode::rational)
        fail(Errc::wrong_mode, "exact QBER needs a rational box");
    if (x < 0 || x > 1)
        fail(Errc::index_out_of_range, "announced input is a bit");
    Rational sum = 0;
    for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (a != b)
                    sum += data.sifted.rat(x, y, a, b);
    return sum / 2;
}

double qber(const SiftedData& data, int x) {
    if (data.sifted.mode() == NumericMode::rational)
        return rat_to_double(qber_exact(data, x));
    if (x < 0 || x > 1)
        fail(Errc::index_out_of_range, "announced input is a bit");
    double sum = 0;
    for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (a != b)
                    sum += data.sifted.value(x, y, a, b);
    return sum / 2.0;
}

double mutual_info_ab(const SiftedData& data) {
    // Joint of (a, b') with x, y uniform.
    double joint[2][2] = {{0, 0}, {0, 0}};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    joint[a][b] += 0.25 * data.sifted.value(x, y, a, b);
    const double pa[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
    const double pb[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
    double info = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (joint[a][b] > 0.0 && pa[a] > 0.0 && pb[b] > 0.0)
                info += joint[a][b] * std::log2(joint[a][b] / (pa[a] * pb[b]));
    return std::max(info, 0.0);
}

namespace {

bool vertex_known(const NsVertex& v, Party target, KnowledgeRule rule) {
    if (v.nonlocal)
        return false; // PR-class boxes reveal nothing about either output
    if (target == Party::alice)
        return v.strategy.alice_map[0] == v.strategy.alice_map[1];
    switch (rule) {
        case KnowledgeRule::output_constant:
        case KnowledgeRule::sifted_at_x0:
            return v.strategy.bob_map[0] == v.strategy.bob_map[1];
        case KnowledgeRule::sifted_at_x1:
            return v.strategy.bob_map[0] != v.strategy.bob_map[1];
    }
    return false;
}

Correlation exact_input(const Correlation& corr) {
    if (corr.mode() == NumericMode::rational)
        return corr;
    return snap_binary_to_ns(corr);
}

double output_entropy(const Correlation& corr, Party target) {
    // Marginal under uniform inputs (no-signaling makes the far input moot).
    double p0 = 0.0;
    const int n_in = 2;
    for (int in = 0; in < n_in; ++in) {
        const MarginalReport m = marginal(corr, target, in);
        p0 += m.dist[0] / n_in;
    }
    return stats::binary_entropy(p0);
}

} // namespace

AttackDecomposition eve_attack_with_rule(const Correlation& corr, Party target,
                                         KnowledgeRule rule) {
    if (!corr.scenario().is_binary())
        fail(Errc::unsupported_scenario, "the attack LP runs on the binary scenario");
    const Correlation q = exact_input(corr);
    if (!is_no_signaling(q).no_signaling)
        fail(Errc::not_no_signaling, "attack target must be no-signaling");

    const auto& verts = ns_vertex_list();
    lp::Problem p;
    p.num_vars = verts.size();
    const auto& want = q.rat_table();
    for (std::size_t cell = 0; cell < want.size(); ++cell) {
        std::vector<Rational> row(p.num_vars);
        for (std::size_t v = 0; v < verts.size(); ++v)
            row[v] = verts[v].box.rat_table()[cell];
        p.add_row(std::move(row), want[cell]);
    }
    p.add_row(std::vector<Rational>(p.num_vars, Rational(1)), Rational(1));

    p.objective.assign(p.num_vars, 0);
    for (std::size_t v = 0; v < verts.size(); ++v)
        if (vertex_known(verts[v], target, rule))
            p.objective[v] = -1; // maximize known weight

    const lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::optimal)
        fail(Errc::infeasible, "no-signaling box failed to decompose; this is a bug");

    AttackDecomposition attack;
    for (std::size_t v = 0; v < sol.x.size(); ++v) {
        if (sol.x[v] != 0) {
            attack.decomposition.vertex_indices.push_back(static_cast<int>(v));
            attack.decomposition.weights.push_back(sol.x[v]);
            if (v >= 16)
                attack.decomposition.nonlocal_weight += sol.x[v];
            attack.known.push_back(vertex_known(verts[v], target, rule));
        }
    }
    attack.known_weight = -sol.objective_value;
    attack.i_be_bits =
        output_entropy(q, target) - (1.0 - rat_to_double(attack.known_weight));
    return attack;
}

AttackDecomposition eve_individual_attack(const Correlation& corr, Party target) {
    return eve_attack_with_rule(corr, target, KnowledgeRule::output_constant);
}

InfoDisturbanceReport info_disturbance_check(const Correlation& corr) {
    const Correlation q = exact_input(corr);
    const SiftedData sifted = sift(q);
    InfoDisturbanceReport rep;
    rep.i0 = eve_attack_with_rule(q, Party::bob, KnowledgeRule::sifted_at_x0).known_weight;
    rep.i1 = eve_attack_with_rule(q, Party::bob, KnowledgeRule::sifted_at_x1).known_weight;
    rep.qber0 = qber_exact(sifted, 0);
    rep.qber1 = qber_exact(sifted, 1);
    rep.residual0 = abs(rep.i0 - 2 * rep.qber1);
    rep.residual1 = abs(rep.i1 - 2 * rep.qber0);
    return rep;
}

KeyRateReport key_rate_at(const Rational& p) {
    const IsotropicBox iso = isotropic(p);
    const SiftedData sifted = sift(iso.box);
    KeyRateReport row;
    row.p_nl = rat_to_double(p);
    row.qber0 = rat_to_double(qber_exact(sifted, 0));
    row.qber1 = rat_to_double(qber_exact(sifted, 1));
    row.i_ab = 1.0 - stats::binary_entropy(row.qber0);
    row.i_be = rat_to_double(eve_individual_attack(iso.box, Party::bob).known_weight);
    row.advantage = row.i_ab - row.i_be;
    return row;
}

KeyAdvantageCurve key_advantage_curve(const std::vector<Rational>& grid) {
    KeyAdvantageCurve curve;
    for (const Rational& p : grid) {
        if (p < 0 || p > 1)
            fail(Errc::out_of_range, "key analysis is defined for p in [0, 1]");
        curve.rows.push_back(key_rate_at(p));
    }
    curve.crossing = advantage_crossing();
    return curve;
}

std::optional<double> advantage_crossing(double lo, double hi) {
    auto advantage = [](double p) {
        return key_rate_at(rat_from_double(p)).advantage;
    };
    double flo = advantage(lo);
    double fhi = advantage(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        return std::nullopt;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = advantage(mid);
        if (fmid == 0.0)
            return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void curve_to_csv(std::ostream& out, const KeyAdvantageCurve& curve) {
    out << "p,qber,i_ab,i_be,advantage\n";
    const auto flags = out.flags();
    out.precision(12);
    for (const KeyRateReport& r : curve.rows)
        out << r.p_nl << ',' << r.qber0 << ',' << r.i_ab << ',' << r.i_be << ','
            << r.advantage << '\n';
    out.flags(flags);
}

ProtocolComparison bb84_vs_chsh_comparison() {
    const quantum::SchmidtState singlet = quantum::singlet_state();

    ProtocolComparison cmp;
    const auto bb84 = quantum::chsh_mark_for_settings(singlet, quantum::named_family("bb84"));
    const auto chsh =
        quantum::chsh_mark_for_settings(singlet, quantum::named_family("chsh-protocol"));
    cmp.mark_bb84 = bb84.mark;
    cmp.mark_chsh_protocol = chsh.mark;

    // The BB84 singlet box is exactly dyadic (entries 0, 1/4, 1/2): lift and
    // attack it directly.
    const Correlation bb84_exact = bb84.box.to_rational();
    const SiftedData bb84_sifted = sift(bb84_exact);
    cmp.bb84.p_nl = cmp.mark_bb84 - 3.0;
    cmp.bb84.qber0 = qber(bb84_sifted, 0);
    cmp.bb84.qber1 = qber(bb84_sifted, 1);
    cmp.bb84.i_ab = mutual_info_ab(bb84_sifted);
    cmp.bb84.i_be =
        rat_to_double(eve_individual_attack(bb84_exact, Party::bob).known_weight);
    cmp.bb84.advantage = cmp.bb84.i_ab - cmp.bb84.i_be;
    cmp.bb84_secure = cmp.bb84.advantage > 0.0;

    // The CHSH-protocol box is the isotropic family at p = mark - 3; analyze
    // the nearest rational parameter.
    const double p_hat = cmp.mark_chsh_protocol - 3.0;
    const Rational p_rat(std::lround(p_hat * 1e9), 1000000000L);
    Rational p_canon = p_rat;
    p_canon.canonicalize();
    cmp.chsh_protocol = key_rate_at(p_canon);
    cmp.chsh_protocol_secure = cmp.chsh_protocol.advantage > 0.0;
    return cmp;
}

nlohmann::ordered_json comparison_to_json(const ProtocolComparison& c) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["type"] = "protocol-comparison";
    auto row = [](const KeyRateReport& r) {
        return nlohmann::ordered_json{{"p_nl", r.p_nl},     {"qber0", r.qber0},
                                      {"qber1", r.qber1},   {"i_ab", r.i_ab},
                                      {"i_be", r.i_be},     {"advantage", r.advantage}};
    };
    j["bb84"] = {{"mark", c.mark_bb84},
                 {"violates_bell", c.mark_bb84 > 3.0},
                 {"analysis", row(c.bb84)},
                 {"secure_against_individual_attacks", c.bb84_secure}};
    j["chsh_protocol"] = {{"mark", c.mark_chsh_protocol},
                          {"violates_bell", c.mark_chsh_protocol > 3.0},
                          {"analysis", row(c.chsh_protocol)},
                          {"secure_against_individual_attacks", c.chsh_protocol_secure}};
    return j;
}

} // namespace nsbox::crypto

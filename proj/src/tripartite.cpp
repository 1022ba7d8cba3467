#include "nsbox/tripartite.hpp"

#include "nsbox/simplex.hpp"

namespace nsbox {

namespace {

// Variables 0..63 are P(a,b,c|x,y,z); extra slack variables are appended by
// the callers for the mark inequalities.
constexpr int kVars = 64;

std::size_t var(const TripartiteScenario& sc, int x, int y, int z, int a, int b, int c) {
    return sc.index(x, y, z, a, b, c);
}

void add_normalization(lp::Problem& p, const TripartiteScenario& sc) {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) {
                std::vector<Rational> row(p.num_vars, 0);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c)
                            row[var(sc, x, y, z, a, b, c)] = 1;
                p.add_row(std::move(row), Rational(1));
            }
}

void add_no_signaling(lp::Problem& p, const TripartiteScenario& sc) {
    // AB marginal independent of z.
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    std::vector<Rational> row(p.num_vars, 0);
                    for (int c = 0; c < 2; ++c) {
                        row[var(sc, x, y, 0, a, b, c)] += 1;
                        row[var(sc, x, y, 1, a, b, c)] -= 1;
                    }
                    p.add_row(std::move(row), Rational(0));
                }
    // AC marginal independent of y.
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) {
                    std::vector<Rational> row(p.num_vars, 0);
                    for (int b = 0; b < 2; ++b) {
                        row[var(sc, x, 0, z, a, b, c)] += 1;
                        row[var(sc, x, 1, z, a, b, c)] -= 1;
                    }
                    p.add_row(std::move(row), Rational(0));
                }
    // BC marginal independent of x.
    for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    std::vector<Rational> row(p.num_vars, 0);
                    for (int a = 0; a < 2; ++a) {
                        row[var(sc, 0, y, z, a, b, c)] += 1;
                        row[var(sc, 1, y, z, a, b, c)] -= 1;
                    }
                    p.add_row(std::move(row), Rational(0));
                }
}

// CHSH mark of the AB pair, read off the z=0 slice (the AB marginal is
// z-independent once the no-signaling rows hold).
std::vector<Rational> mark_ab_coeffs(const TripartiteScenario& sc, std::size_t width) {
    std::vector<Rational> row(width, 0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if ((a ^ b) == (x & y))
                        for (int c = 0; c < 2; ++c)
                            row[var(sc, x, y, 0, a, b, c)] += 1;
    return row;
}

std::vector<Rational> mark_ac_coeffs(const TripartiteScenario& sc, std::size_t width) {
    std::vector<Rational> row(width, 0);
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c)
                    if ((a ^ c) == (x & z))
                        for (int b = 0; b < 2; ++b)
                            row[var(sc, x, 0, z, a, b, c)] += 1;
    return row;
}

TripartiteCorrelation extract_box(const TripartiteScenario& sc,
                                  const std::vector<Rational>& x) {
    std::vector<Rational> table(kVars);
    for (int i = 0; i < kVars; ++i)
        table[i] = x[i];
    return TripartiteCorrelation::validate(sc, std::move(table));
}

} // namespace

MonogamyResult monogamy_max(const Rational& m_ab) {
    if (m_ab > 4)
        fail(Errc::infeasible_target, "CHSH mark cannot exceed 4");

    const TripartiteScenario sc = TripartiteScenario::binary();
    lp::Problem p;
    p.num_vars = kVars + 1; // one slack for M_AB >= m_ab
    add_normalization(p, sc);
    add_no_signaling(p, sc);

    std::vector<Rational> ab = mark_ab_coeffs(sc, p.num_vars);
    ab[kVars] = -1; // M_AB - slack = m_ab
    p.add_row(std::move(ab), m_ab);

    p.objective.assign(p.num_vars, 0);
    const std::vector<Rational> ac = mark_ac_coeffs(sc, p.num_vars);
    for (std::size_t j = 0; j < p.num_vars; ++j)
        p.objective[j] = -ac[j]; // maximize M_AC

    const lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::optimal)
        fail(Errc::infeasible_target, "no tripartite box reaches the requested AB mark");

    return MonogamyResult{m_ab, -sol.objective_value, extract_box(sc, sol.x)};
}

CloningFeasibility cloning_feasible(const Rational& m_ab, const Rational& m_ac) {
    CloningFeasibility result;
    result.target_ab = m_ab;
    result.target_ac = m_ac;

    const TripartiteScenario sc = TripartiteScenario::binary();
    lp::Problem p;
    p.num_vars = kVars + 2;
    add_normalization(p, sc);
    add_no_signaling(p, sc);

    std::vector<Rational> ab = mark_ab_coeffs(sc, p.num_vars);
    ab[kVars] = -1;
    p.add_row(std::move(ab), m_ab);
    std::vector<Rational> ac = mark_ac_coeffs(sc, p.num_vars);
    ac[kVars + 1] = -1;
    p.add_row(std::move(ac), m_ac);

    const lp::Solution sol = lp::solve(p);
    result.feasible = sol.status == lp::Status::optimal;
    if (result.feasible) {
        result.witness = extract_box(sc, sol.x);
    } else if (m_ab == 4 && m_ac == 4) {
        // Both pairs PR-perfect means a+b = xy and a+c = xz, so with y=1, z=0
        // the parity b+c = x(y+z) = x: P(b xor c = 1 | x, 1, 0) = x.
        result.parity_leak = std::array<Rational, 2>{Rational(0), Rational(1)};
    }
    return result;
}

} // namespace nsbox

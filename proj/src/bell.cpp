#include "nsbox/bell.hpp"

#include <cmath>

namespace nsbox {

std::optional<std::uint64_t> strategy_count(const Scenario& sc) {
    std::uint64_t total = 1;
    auto mul_pow = [&total](std::uint64_t base, int exp) -> bool {
        for (int i = 0; i < exp; ++i) {
            if (base != 0 && total > UINT64_MAX / base)
                return false;
            total *= base;
        }
        return true;
    };
    if (!mul_pow(sc.na, sc.nx) || !mul_pow(sc.nb, sc.ny))
        return std::nullopt;
    return total;
}

DeterministicStrategy strategy_at(const Scenario& sc, std::uint64_t index) {
    std::uint64_t bob_total = 1;
    for (int i = 0; i < sc.ny; ++i)
        bob_total *= sc.nb;
    std::uint64_t ka = index / bob_total;
    std::uint64_t kb = index % bob_total;

    DeterministicStrategy s;
    s.alice_map.assign(sc.nx, 0);
    s.bob_map.assign(sc.ny, 0);
    // x = 0 is the most significant digit so increasing index is
    // lexicographic in (a(0), a(1), ..., b(0), b(1), ...).
    for (int x = sc.nx - 1; x >= 0; --x) {
        s.alice_map[x] = static_cast<int>(ka % sc.na);
        ka /= sc.na;
    }
    for (int y = sc.ny - 1; y >= 0; --y) {
        s.bob_map[y] = static_cast<int>(kb % sc.nb);
        kb /= sc.nb;
    }
    return s;
}

std::vector<DeterministicStrategy> enumerate_deterministic(const Scenario& sc,
                                                           std::uint64_t cap) {
    const auto count = strategy_count(sc);
    if (!count || *count > cap)
        fail(Errc::cap_exceeded, "strategy count exceeds cap");
    std::vector<DeterministicStrategy> out;
    out.reserve(*count);
    for (std::uint64_t i = 0; i < *count; ++i)
        out.push_back(strategy_at(sc, i));
    return out;
}

Correlation strategy_box(const Scenario& sc, const DeterministicStrategy& s) {
    if (static_cast<int>(s.alice_map.size()) != sc.nx ||
        static_cast<int>(s.bob_map.size()) != sc.ny)
        fail(Errc::shape_mismatch, "strategy maps do not cover the scenario");
    std::vector<Rational> t(sc.table_size(), 0);
    for (int x = 0; x < sc.nx; ++x)
        for (int y = 0; y < sc.ny; ++y)
            t[sc.index(x, y, s.alice_map[x], s.bob_map[y])] = 1;
    return Correlation::validate(sc, std::move(t));
}

BellFunctional chsh_facet(int alpha, int beta, int gamma) {
    BellFunctional f;
    f.name = "chsh(" + std::to_string(alpha) + std::to_string(beta) +
             std::to_string(gamma) + ")";
    f.scenario = Scenario::binary();
    f.coeff.assign(16, 0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma))
                        f.coeff[f.scenario.index(x, y, a, b)] = 1;
    f.local_bound = 3;
    f.quantum_bound = 2.0 + std::sqrt(2.0);
    f.ns_bound = 4;
    return f;
}

BellFunctional chsh_functional() {
    BellFunctional f = chsh_facet(0, 0, 0);
    f.name = "chsh";
    return f;
}

std::vector<BellFunctional> chsh_facets() {
    std::vector<BellFunctional> out;
    out.reserve(8);
    for (int alpha = 0; alpha < 2; ++alpha)
        for (int beta = 0; beta < 2; ++beta)
            for (int gamma = 0; gamma < 2; ++gamma)
                out.push_back(chsh_facet(alpha, beta, gamma));
    return out;
}

Rational evaluate(const BellFunctional& f, const Correlation& corr) {
    if (f.scenario != corr.scenario())
        fail(Errc::scenario_mismatch, "functional and box disagree on the scenario");
    const auto& table = corr.rat_table();
    Rational sum = 0;
    for (std::size_t i = 0; i < table.size(); ++i)
        if (f.coeff[i] != 0)
            sum += f.coeff[i] * table[i];
    return sum;
}

double evaluate_d(const BellFunctional& f, const Correlation& corr) {
    if (f.scenario != corr.scenario())
        fail(Errc::scenario_mismatch, "functional and box disagree on the scenario");
    const Scenario& sc = f.scenario;
    double sum = 0;
    for (int x = 0; x < sc.nx; ++x)
        for (int y = 0; y < sc.ny; ++y)
            for (int a = 0; a < sc.na; ++a)
                for (int b = 0; b < sc.nb; ++b) {
                    const Rational& c = f.c(x, y, a, b);
                    if (c != 0)
                        sum += rat_to_double(c) * corr.value(x, y, a, b);
                }
    return sum;
}

LocalBoundResult local_bound(const BellFunctional& f, std::uint64_t cap) {
    const Scenario& sc = f.scenario;
    const auto count = strategy_count(sc);
    if (!count || *count > cap)
        fail(Errc::cap_exceeded, "strategy count exceeds cap");

    LocalBoundResult best{Rational(0), strategy_at(sc, 0)};
    bool first = true;
    for (std::uint64_t i = 0; i < *count; ++i) {
        DeterministicStrategy s = strategy_at(sc, i);
        Rational v = 0;
        for (int x = 0; x < sc.nx; ++x)
            for (int y = 0; y < sc.ny; ++y)
                v += f.c(x, y, s.alice_map[x], s.bob_map[y]);
        if (first || v > best.value) {
            best.value = v;
            best.argmax = std::move(s);
            first = false;
        }
    }
    return best;
}

} // namespace nsbox

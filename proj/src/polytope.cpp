#include "nsbox/polytope.hpp"

#include <algorithm>

#include "nsbox/simplex.hpp"

namespace nsbox {

Correlation pr_class_vertex(int alpha, int beta, int gamma) {
    const Scenario sc = Scenario::binary();
    std::vector<Rational> t(16, 0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma))
                        t[sc.index(x, y, a, b)] = rat(1, 2);
    return Correlation::validate(sc, std::move(t));
}

Correlation pr_box() {
    return pr_class_vertex(0, 0, 0);
}

const std::vector<NsVertex>& ns_vertex_list() {
    static const std::vector<NsVertex> vertices = [] {
        const Scenario sc = Scenario::binary();
        std::vector<NsVertex> out;
        out.reserve(24);
        for (std::uint64_t i = 0; i < 16; ++i) {
            const DeterministicStrategy s = strategy_at(sc, i);
            out.push_back(NsVertex{static_cast<int>(i), false, s, 0, 0, 0,
                                   strategy_box(sc, s)});
        }
        for (int alpha = 0; alpha < 2; ++alpha)
            for (int beta = 0; beta < 2; ++beta)
                for (int gamma = 0; gamma < 2; ++gamma)
                    out.push_back(NsVertex{16 + alpha * 4 + beta * 2 + gamma, true,
                                           DeterministicStrategy{}, alpha, beta, gamma,
                                           pr_class_vertex(alpha, beta, gamma)});
        return out;
    }();
    return vertices;
}

namespace {

// Rational-mode view of the input for the exact LPs, snapping float binary
// boxes onto the no-signaling subspace.
Correlation exact_ns_view(const Correlation& corr, const char* op) {
    if (corr.mode() == NumericMode::rational) {
        if (!is_no_signaling(corr).no_signaling)
            fail(Errc::not_no_signaling, std::string(op) + " requires a no-signaling box");
        return corr;
    }
    if (!is_no_signaling(corr, kDefaultTol).no_signaling)
        fail(Errc::not_no_signaling, std::string(op) + " requires a no-signaling box");
    if (corr.scenario().is_binary())
        return snap_binary_to_ns(corr);
    Correlation lifted = corr.to_rational();
    if (!is_no_signaling(lifted).no_signaling)
        fail(Errc::not_no_signaling,
             std::string(op) +
                 ": float box is not exactly no-signaling after the dyadic lift; "
                 "supply rational input for non-binary scenarios");
    return lifted;
}

// Reconstruction constraints: one row per table cell, one normalization row.
lp::Problem reconstruction_problem(const Correlation& target,
                                   const std::vector<const Correlation*>& vertices) {
    lp::Problem p;
    p.num_vars = vertices.size();
    const auto& want = target.rat_table();
    for (std::size_t cell = 0; cell < want.size(); ++cell) {
        std::vector<Rational> row(p.num_vars);
        for (std::size_t v = 0; v < vertices.size(); ++v)
            row[v] = vertices[v]->rat_table()[cell];
        p.add_row(std::move(row), want[cell]);
    }
    p.add_row(std::vector<Rational>(p.num_vars, Rational(1)), Rational(1));
    return p;
}

} // namespace

Correlation snap_binary_to_ns(const Correlation& corr, double tol) {
    if (!corr.scenario().is_binary())
        fail(Errc::unsupported_scenario, "snap is defined for the binary scenario");
    if (corr.mode() == NumericMode::rational)
        return corr;

    const Scenario sc = Scenario::binary();
    // One-party marginals averaged over the far input, plus per-setting
    // joints, reconstructed into an exactly no-signaling table.
    Rational ma[2], mb[2], j[2][2];
    for (int x = 0; x < 2; ++x) {
        double v = 0;
        for (int y = 0; y < 2; ++y)
            for (int b = 0; b < 2; ++b)
                v += corr.value(x, y, 0, b);
        ma[x] = rat_from_double(v / 2.0);
    }
    for (int y = 0; y < 2; ++y) {
        double v = 0;
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < 2; ++a)
                v += corr.value(x, y, a, 0);
        mb[y] = rat_from_double(v / 2.0);
    }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            j[x][y] = rat_from_double(corr.value(x, y, 0, 0));

    std::vector<Rational> t(16);
    Rational most_negative = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            t[sc.index(x, y, 0, 0)] = j[x][y];
            t[sc.index(x, y, 0, 1)] = ma[x] - j[x][y];
            t[sc.index(x, y, 1, 0)] = mb[y] - j[x][y];
            t[sc.index(x, y, 1, 1)] = 1 - ma[x] - mb[y] + j[x][y];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (t[sc.index(x, y, a, b)] < most_negative)
                        most_negative = t[sc.index(x, y, a, b)];
        }

    if (most_negative < 0) {
        if (rat_to_double(-most_negative) > 16 * tol)
            fail(Errc::negative_entry, "float box too far outside the probability simplex");
        // Mix toward uniform just enough to clear the rounding debris.
        const Rational eps = -most_negative * 8;
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] = (1 - eps) * t[i] + eps * rat(1, 4);
    }
    return Correlation::validate(sc, std::move(t));
}

LocalityResult is_local(const Correlation& corr, std::uint64_t cap) {
    const Correlation q = exact_ns_view(corr, "is_local");
    const Scenario& sc = q.scenario();

    const auto count = strategy_count(sc);
    if (!count || *count > cap)
        fail(Errc::cap_exceeded, "strategy count exceeds cap");

    std::vector<Correlation> strat_boxes;
    strat_boxes.reserve(*count);
    std::vector<const Correlation*> ptrs;
    ptrs.reserve(*count);
    for (std::uint64_t i = 0; i < *count; ++i) {
        strat_boxes.push_back(strategy_box(sc, strategy_at(sc, i)));
        ptrs.push_back(&strat_boxes.back());
    }

    const lp::Problem p = reconstruction_problem(q, ptrs);
    const lp::Solution sol = lp::solve(p);

    if (sol.status == lp::Status::optimal) {
        Decomposition d;
        for (std::size_t v = 0; v < sol.x.size(); ++v) {
            if (sol.x[v] != 0) {
                d.vertex_indices.push_back(static_cast<int>(v));
                d.weights.push_back(sol.x[v]);
            }
        }
        return d;
    }

    if (sc.is_binary()) {
        // Deterministic certificate: the most violated CHSH-class facet,
        // ties broken by lexicographic (alpha,beta,gamma).
        NonlocalityCertificate best;
        bool found = false;
        for (const BellFunctional& f : chsh_facets()) {
            const Rational achieved = evaluate(f, q);
            const Rational margin = achieved - *f.local_bound;
            if (margin > 0 && (!found || margin > best.margin)) {
                best = NonlocalityCertificate{f, achieved, margin};
                found = true;
            }
        }
        if (!found)
            fail(Errc::infeasible,
                 "LP infeasible but no CHSH facet violated; inconsistent state");
        return best;
    }

    // General scenario: Farkas certificate turned into a Bell functional.
    BellFunctional f;
    f.name = "farkas-certificate";
    f.scenario = sc;
    f.coeff.assign(sc.table_size(), 0);
    for (std::size_t cell = 0; cell < sc.table_size(); ++cell)
        f.coeff[cell] = sol.farkas[cell];
    const LocalBoundResult lb = local_bound(f, cap);
    f.local_bound = lb.value;
    const Rational achieved = evaluate(f, q);
    if (achieved <= lb.value)
        fail(Errc::infeasible, "Farkas certificate failed to separate; inconsistent state");
    return NonlocalityCertificate{f, achieved, achieved - lb.value};
}

Decomposition decompose_ns(const Correlation& corr) {
    if (!corr.scenario().is_binary())
        fail(Errc::unsupported_scenario, "decompose_ns is defined for the binary scenario");
    const Correlation q = exact_ns_view(corr, "decompose_ns");

    const auto& verts = ns_vertex_list();
    std::vector<const Correlation*> ptrs;
    ptrs.reserve(verts.size());
    for (const auto& v : verts)
        ptrs.push_back(&v.box);

    lp::Problem p = reconstruction_problem(q, ptrs);
    p.objective.assign(p.num_vars, Rational(0));
    for (std::size_t v = 16; v < 24; ++v)
        p.objective[v] = 1; // minimize total nonlocal weight

    const lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::optimal)
        fail(Errc::infeasible, "no-signaling box failed to decompose; this is a bug");

    Decomposition d;
    for (std::size_t v = 0; v < sol.x.size(); ++v) {
        if (sol.x[v] != 0) {
            d.vertex_indices.push_back(static_cast<int>(v));
            d.weights.push_back(sol.x[v]);
            if (v >= 16)
                d.nonlocal_weight += sol.x[v];
        }
    }
    return d;
}

bool verify_vertex(const Correlation& corr) {
    if (!corr.scenario().is_binary())
        fail(Errc::unsupported_scenario, "verify_vertex is defined for the binary scenario");
    const Correlation q = exact_ns_view(corr, "verify_vertex");

    const auto& verts = ns_vertex_list();
    int self = -1;
    for (const auto& v : verts) {
        if (v.box == q) {
            self = v.index;
            break;
        }
    }
    if (self < 0)
        return false; // every NS box decomposes; one not in the list is a mixture

    std::vector<const Correlation*> ptrs;
    for (const auto& v : verts)
        ptrs.push_back(&v.box);
    lp::Problem p = reconstruction_problem(q, ptrs);
    p.objective.assign(p.num_vars, Rational(0));
    p.objective[self] = 1; // can the box shed any weight off itself?

    const lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::optimal)
        fail(Errc::infeasible, "vertex candidate failed to decompose; this is a bug");
    return sol.objective_value == 1;
}

Correlation recompose(const Decomposition& d) {
    const auto& verts = ns_vertex_list();
    std::vector<std::pair<Rational, Correlation>> parts;
    for (std::size_t i = 0; i < d.vertex_indices.size(); ++i) {
        const int idx = d.vertex_indices[i];
        if (idx < 0 || idx >= static_cast<int>(verts.size()))
            fail(Errc::index_out_of_range, "vertex index outside 0..23");
        parts.emplace_back(d.weights[i], verts[idx].box);
    }
    return mix(parts);
}

int affine_dimension(const std::vector<Correlation>& boxes) {
    if (boxes.empty())
        return -1;
    const auto& base = boxes.front().rat_table();
    std::vector<std::vector<Rational>> diffs;
    for (std::size_t i = 1; i < boxes.size(); ++i) {
        const auto& t = boxes[i].rat_table();
        if (t.size() != base.size())
            fail(Errc::scenario_mismatch, "boxes of different shapes");
        std::vector<Rational> d(t.size());
        for (std::size_t k = 0; k < t.size(); ++k)
            d[k] = t[k] - base[k];
        diffs.push_back(std::move(d));
    }

    // Exact Gaussian elimination rank.
    int rank = 0;
    const std::size_t cols = base.size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < diffs.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < diffs.size() && diffs[pivot][col] == 0)
            ++pivot;
        if (pivot == diffs.size())
            continue;
        std::swap(diffs[row], diffs[pivot]);
        for (std::size_t i = row + 1; i < diffs.size(); ++i) {
            if (diffs[i][col] != 0) {
                const Rational f = diffs[i][col] / diffs[row][col];
                for (std::size_t k = col; k < cols; ++k)
                    diffs[i][k] -= f * diffs[row][k];
            }
        }
        ++row;
        ++rank;
    }
    return rank;
}

} // namespace nsbox

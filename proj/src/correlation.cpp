#include "nsbox/correlation.hpp"

#include <cmath>
#include <cstdlib>

namespace nsbox {

void Scenario::check(int x, int y, int a, int b) const {
    if (x < 0 || x >= nx || y < 0 || y >= ny || a < 0 || a >= na || b < 0 || b >= nb)
        fail(Errc::index_out_of_range, "symbol outside scenario alphabets");
}

const char* party_name(Party p) noexcept {
    return p == Party::alice ? "alice" : "bob";
}

static void check_scenario_counts(const Scenario& sc) {
    if (sc.nx < 1 || sc.ny < 1 || sc.na < 1 || sc.nb < 1)
        fail(Errc::shape_mismatch, "scenario counts must be positive");
}

Correlation Correlation::validate(const Scenario& sc, std::vector<Rational> table) {
    check_scenario_counts(sc);
    if (table.size() != sc.table_size())
        fail(Errc::shape_mismatch, "table size does not match scenario");

    for (const Rational& v : table)
        if (v < 0)
            fail(Errc::negative_entry, "negative probability entry");

    for (int x = 0; x < sc.nx; ++x) {
        for (int y = 0; y < sc.ny; ++y) {
            Rational sum = 0;
            for (int a = 0; a < sc.na; ++a)
                for (int b = 0; b < sc.nb; ++b)
                    sum += table[sc.index(x, y, a, b)];
            if (sum != 1)
                fail(Errc::not_normalized, "setting (" + std::to_string(x) + "," +
                                               std::to_string(y) + ") sums to " +
                                               rat_to_string(sum));
        }
    }

    Correlation c;
    c.scenario_ = sc;
    c.mode_ = NumericMode::rational;
    c.rat_ = std::move(table);
    return c;
}

Correlation Correlation::validate(const Scenario& sc, std::vector<double> table, double tol) {
    check_scenario_counts(sc);
    if (table.size() != sc.table_size())
        fail(Errc::shape_mismatch, "table size does not match scenario");

    for (double v : table) {
        if (!std::isfinite(v))
            fail(Errc::not_normalized, "non-finite probability entry");
        if (v < -tol)
            fail(Errc::negative_entry, "negative probability entry");
    }

    for (int x = 0; x < sc.nx; ++x) {
        for (int y = 0; y < sc.ny; ++y) {
            double sum = 0;
            for (int a = 0; a < sc.na; ++a)
                for (int b = 0; b < sc.nb; ++b)
                    sum += table[sc.index(x, y, a, b)];
            if (std::abs(sum - 1.0) > tol)
                fail(Errc::not_normalized, "setting (" + std::to_string(x) + "," +
                                               std::to_string(y) + ") sums to " +
                                               std::to_string(sum));
        }
    }

    Correlation c;
    c.scenario_ = sc;
    c.mode_ = NumericMode::floating;
    c.flt_ = std::move(table);
    return c;
}

const Rational& Correlation::rat(int x, int y, int a, int b) const {
    if (mode_ != NumericMode::rational)
        fail(Errc::wrong_mode, "rational entry requested from float-mode box");
    scenario_.check(x, y, a, b);
    return rat_[scenario_.index(x, y, a, b)];
}

double Correlation::value(int x, int y, int a, int b) const {
    scenario_.check(x, y, a, b);
    const std::size_t i = scenario_.index(x, y, a, b);
    return mode_ == NumericMode::rational ? rat_to_double(rat_[i]) : flt_[i];
}

const std::vector<Rational>& Correlation::rat_table() const {
    if (mode_ != NumericMode::rational)
        fail(Errc::wrong_mode, "rational table requested from float-mode box");
    return rat_;
}

const std::vector<double>& Correlation::float_table() const {
    if (mode_ != NumericMode::floating)
        fail(Errc::wrong_mode, "float table requested from rational-mode box");
    return flt_;
}

Correlation Correlation::to_rational() const {
    if (mode_ == NumericMode::rational)
        return *this;
    std::vector<Rational> t(flt_.size());
    for (std::size_t i = 0; i < flt_.size(); ++i)
        t[i] = rat_from_double(std::max(flt_[i], 0.0));
    // Dyadic lift of a tolerance-normalized table is generally not exactly
    // normalized; renormalize each setting so the result is a valid box.
    const Scenario& sc = scenario_;
    for (int x = 0; x < sc.nx; ++x) {
        for (int y = 0; y < sc.ny; ++y) {
            Rational sum = 0;
            for (int a = 0; a < sc.na; ++a)
                for (int b = 0; b < sc.nb; ++b)
                    sum += t[sc.index(x, y, a, b)];
            if (sum == 0)
                fail(Errc::not_normalized, "empty setting in float table");
            if (sum != 1)
                for (int a = 0; a < sc.na; ++a)
                    for (int b = 0; b < sc.nb; ++b)
                        t[sc.index(x, y, a, b)] /= sum;
        }
    }
    return validate(sc, std::move(t));
}

Correlation Correlation::to_float() const {
    if (mode_ == NumericMode::floating)
        return *this;
    std::vector<double> t(rat_.size());
    for (std::size_t i = 0; i < rat_.size(); ++i)
        t[i] = rat_to_double(rat_[i]);
    return validate(scenario_, std::move(t), 1e-12);
}

bool Correlation::operator==(const Correlation& other) const {
    if (scenario_ != other.scenario_ || mode_ != other.mode_)
        return false;
    return mode_ == NumericMode::rational ? rat_ == other.rat_ : flt_ == other.flt_;
}

// ---------------------------------------------------------------------------

MarginalReport marginal(const Correlation& corr, Party party, int input) {
    const Scenario& sc = corr.scenario();
    const int n_in = party == Party::alice ? sc.nx : sc.ny;
    const int n_out = party == Party::alice ? sc.na : sc.nb;
    const int n_other = party == Party::alice ? sc.ny : sc.nx;
    if (input < 0 || input >= n_in)
        fail(Errc::index_out_of_range, "marginal input outside alphabet");

    MarginalReport rep;
    rep.party = party;
    rep.input = input;
    rep.mode = corr.mode();

    if (corr.mode() == NumericMode::rational) {
        // dist[o][other] = P(o | input, other)
        std::vector<std::vector<Rational>> dist(n_out, std::vector<Rational>(n_other, 0));
        for (int o = 0; o < n_out; ++o) {
            for (int other = 0; other < n_other; ++other) {
                Rational sum = 0;
                const int far_out = party == Party::alice ? sc.nb : sc.na;
                for (int f = 0; f < far_out; ++f) {
                    sum += party == Party::alice ? corr.rat(input, other, o, f)
                                                 : corr.rat(other, input, f, o);
                }
                dist[o][other] = sum;
            }
        }
        rep.dist_rat.resize(n_out);
        rep.dist.resize(n_out);
        Rational worst = 0;
        for (int o = 0; o < n_out; ++o) {
            Rational avg = 0;
            for (int other = 0; other < n_other; ++other)
                avg += dist[o][other];
            avg /= n_other;
            rep.dist_rat[o] = avg;
            rep.dist[o] = rat_to_double(avg);
            for (int u = 0; u < n_other; ++u) {
                for (int v = u + 1; v < n_other; ++v) {
                    Rational d = abs(dist[o][u] - dist[o][v]);
                    if (d > worst)
                        worst = d;
                }
            }
        }
        rep.deviation_rat = worst;
        rep.deviation = rat_to_double(worst);
    } else {
        std::vector<std::vector<double>> dist(n_out, std::vector<double>(n_other, 0.0));
        for (int o = 0; o < n_out; ++o) {
            for (int other = 0; other < n_other; ++other) {
                double sum = 0;
                const int far_out = party == Party::alice ? sc.nb : sc.na;
                for (int f = 0; f < far_out; ++f) {
                    sum += party == Party::alice ? corr.value(input, other, o, f)
                                                 : corr.value(other, input, f, o);
                }
                dist[o][other] = sum;
            }
        }
        rep.dist.resize(n_out);
        double worst = 0;
        for (int o = 0; o < n_out; ++o) {
            double avg = 0;
            for (int other = 0; other < n_other; ++other)
                avg += dist[o][other];
            rep.dist[o] = avg / n_other;
            for (int u = 0; u < n_other; ++u)
                for (int v = u + 1; v < n_other; ++v)
                    worst = std::max(worst, std::abs(dist[o][u] - dist[o][v]));
        }
        rep.deviation = worst;
    }
    return rep;
}

NoSignalingReport is_no_signaling(const Correlation& corr, double tol) {
    NoSignalingReport rep;
    const Scenario& sc = corr.scenario();
    Rational worst_rat = 0;
    double worst = 0;
    for (int x = 0; x < sc.nx; ++x) {
        MarginalReport m = marginal(corr, Party::alice, x);
        worst = std::max(worst, m.deviation);
        if (corr.mode() == NumericMode::rational && m.deviation_rat > worst_rat)
            worst_rat = m.deviation_rat;
    }
    for (int y = 0; y < sc.ny; ++y) {
        MarginalReport m = marginal(corr, Party::bob, y);
        worst = std::max(worst, m.deviation);
        if (corr.mode() == NumericMode::rational && m.deviation_rat > worst_rat)
            worst_rat = m.deviation_rat;
    }
    rep.worst_deviation = worst;
    rep.worst_deviation_rat = worst_rat;
    rep.no_signaling = corr.mode() == NumericMode::rational ? worst_rat == 0 : worst <= tol;
    return rep;
}

Correlation mix(const std::vector<std::pair<Rational, Correlation>>& parts) {
    if (parts.empty())
        fail(Errc::weight_sum_invalid, "empty mixture");
    const Scenario& sc = parts.front().second.scenario();
    Rational wsum = 0;
    for (const auto& [w, c] : parts) {
        if (w < 0)
            fail(Errc::weight_sum_invalid, "negative mixture weight");
        if (c.scenario() != sc)
            fail(Errc::scenario_mismatch, "mixture components over different scenarios");
        if (c.mode() != NumericMode::rational)
            fail(Errc::wrong_mode, "rational mix requires rational components");
        wsum += w;
    }
    if (wsum != 1)
        fail(Errc::weight_sum_invalid, "weights sum to " + rat_to_string(wsum));

    std::vector<Rational> t(sc.table_size(), 0);
    for (const auto& [w, c] : parts) {
        const auto& src = c.rat_table();
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] += w * src[i];
    }
    return Correlation::validate(sc, std::move(t));
}

Correlation mix(const std::vector<std::pair<double, Correlation>>& parts, double tol) {
    if (parts.empty())
        fail(Errc::weight_sum_invalid, "empty mixture");
    const Scenario& sc = parts.front().second.scenario();
    double wsum = 0;
    for (const auto& [w, c] : parts) {
        if (w < 0)
            fail(Errc::weight_sum_invalid, "negative mixture weight");
        if (c.scenario() != sc)
            fail(Errc::scenario_mismatch, "mixture components over different scenarios");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > tol)
        fail(Errc::weight_sum_invalid, "weights sum to " + std::to_string(wsum));

    std::vector<double> t(sc.table_size(), 0.0);
    for (const auto& [w, c] : parts)
        for (int x = 0; x < sc.nx; ++x)
            for (int y = 0; y < sc.ny; ++y)
                for (int a = 0; a < sc.na; ++a)
                    for (int b = 0; b < sc.nb; ++b)
                        t[sc.index(x, y, a, b)] += w * c.value(x, y, a, b);
    return Correlation::validate(sc, std::move(t), tol * (parts.size() + 1));
}

SampleCounts SampleCounts::zero(const Scenario& sc) {
    SampleCounts c;
    c.scenario = sc;
    c.cells.assign(sc.table_size(), 0);
    return c;
}

void SampleCounts::add(int x, int y, int a, int b, std::uint64_t n) {
    scenario.check(x, y, a, b);
    cells[scenario.index(x, y, a, b)] += n;
}

std::uint64_t SampleCounts::setting_total(int x, int y) const {
    std::uint64_t total = 0;
    for (int a = 0; a < scenario.na; ++a)
        for (int b = 0; b < scenario.nb; ++b)
            total += cells[scenario.index(x, y, a, b)];
    return total;
}

EmpiricalCorrelation from_samples(const SampleCounts& counts) {
    const Scenario& sc = counts.scenario;
    if (counts.cells.size() != sc.table_size())
        fail(Errc::shape_mismatch, "sample counts do not match scenario");

    std::vector<double> table(sc.table_size(), 0.0);
    std::vector<std::uint64_t> per_setting(static_cast<std::size_t>(sc.nx) * sc.ny, 0);
    for (int x = 0; x < sc.nx; ++x) {
        for (int y = 0; y < sc.ny; ++y) {
            const std::uint64_t n = counts.setting_total(x, y);
            if (n == 0)
                fail(Errc::missing_setting, "no rounds for setting (" + std::to_string(x) +
                                                "," + std::to_string(y) + ")");
            per_setting[static_cast<std::size_t>(x) * sc.ny + y] = n;
            for (int a = 0; a < sc.na; ++a)
                for (int b = 0; b < sc.nb; ++b)
                    table[sc.index(x, y, a, b)] =
                        static_cast<double>(counts.cells[sc.index(x, y, a, b)]) /
                        static_cast<double>(n);
        }
    }

    EmpiricalCorrelation result{Correlation::validate(sc, std::move(table), 1e-12),
                                std::move(per_setting), counts};
    return result;
}

EmpiricalCorrelation from_samples(const Scenario& sc,
                                  std::span<const std::array<int, 4>> rounds) {
    SampleCounts counts = SampleCounts::zero(sc);
    for (const auto& r : rounds)
        counts.add(r[0], r[1], r[2], r[3]);
    return from_samples(counts);
}

Correlation uniform_box(const Scenario& sc) {
    std::vector<Rational> t(sc.table_size(), rat(1, static_cast<long>(sc.na) * sc.nb));
    return Correlation::validate(sc, std::move(t));
}

// ---------------------------------------------------------------------------

TripartiteCorrelation TripartiteCorrelation::validate(const TripartiteScenario& sc,
                                                      std::vector<Rational> table) {
    if (sc.nx < 1 || sc.ny < 1 || sc.nz < 1 || sc.na < 1 || sc.nb < 1 || sc.nc < 1)
        fail(Errc::shape_mismatch, "tripartite scenario counts must be positive");
    if (table.size() != sc.table_size())
        fail(Errc::shape_mismatch, "tripartite table size mismatch");
    for (const Rational& v : table)
        if (v < 0)
            fail(Errc::negative_entry, "negative tripartite entry");
    for (int x = 0; x < sc.nx; ++x)
        for (int y = 0; y < sc.ny; ++y)
            for (int z = 0; z < sc.nz; ++z) {
                Rational sum = 0;
                for (int a = 0; a < sc.na; ++a)
                    for (int b = 0; b < sc.nb; ++b)
                        for (int c = 0; c < sc.nc; ++c)
                            sum += table[sc.index(x, y, z, a, b, c)];
                if (sum != 1)
                    fail(Errc::not_normalized, "tripartite setting not normalized");
            }
    TripartiteCorrelation t;
    t.scenario_ = sc;
    t.table_ = std::move(table);
    return t;
}

const Rational& TripartiteCorrelation::rat(int x, int y, int z, int a, int b, int c) const {
    return table_[scenario_.index(x, y, z, a, b, c)];
}

bool is_no_signaling(const TripartiteCorrelation& corr) {
    const TripartiteScenario& sc = corr.scenario();

    // AB marginal independent of z.
    for (int x = 0; x < sc.nx; ++x)
        for (int y = 0; y < sc.ny; ++y)
            for (int a = 0; a < sc.na; ++a)
                for (int b = 0; b < sc.nb; ++b) {
                    Rational ref = 0;
                    for (int c = 0; c < sc.nc; ++c)
                        ref += corr.rat(x, y, 0, a, b, c);
                    for (int z = 1; z < sc.nz; ++z) {
                        Rational s = 0;
                        for (int c = 0; c < sc.nc; ++c)
                            s += corr.rat(x, y, z, a, b, c);
                        if (s != ref)
                            return false;
                    }
                }
    // AC marginal independent of y.
    for (int x = 0; x < sc.nx; ++x)
        for (int z = 0; z < sc.nz; ++z)
            for (int a = 0; a < sc.na; ++a)
                for (int c = 0; c < sc.nc; ++c) {
                    Rational ref = 0;
                    for (int b = 0; b < sc.nb; ++b)
                        ref += corr.rat(x, 0, z, a, b, c);
                    for (int y = 1; y < sc.ny; ++y) {
                        Rational s = 0;
                        for (int b = 0; b < sc.nb; ++b)
                            s += corr.rat(x, y, z, a, b, c);
                        if (s != ref)
                            return false;
                    }
                }
    // BC marginal independent of x.
    for (int y = 0; y < sc.ny; ++y)
        for (int z = 0; z < sc.nz; ++z)
            for (int b = 0; b < sc.nb; ++b)
                for (int c = 0; c < sc.nc; ++c) {
                    Rational ref = 0;
                    for (int a = 0; a < sc.na; ++a)
                        ref += corr.rat(0, y, z, a, b, c);
                    for (int x = 1; x < sc.nx; ++x) {
                        Rational s = 0;
                        for (int a = 0; a < sc.na; ++a)
                            s += corr.rat(x, y, z, a, b, c);
                        if (s != ref)
                            return false;
                    }
                }
    return true;
}

} // namespace nsbox

#include "nsbox/quantum.hpp"

#include <cmath>

#include "nsbox/errors.hpp"
#include "nsbox/rng.hpp"

namespace nsbox::quantum {

namespace {
constexpr double kUnitTol = 1e-12;
constexpr double kInvSqrt2 = 0.70710678118654752;
} // namespace

Direction make_direction(double x, double y, double z) {
    return make_direction(Vec3{x, y, z});
}

Direction make_direction(const Vec3& v) {
    const double norm = std::sqrt(dot(v, v));
    if (std::abs(norm - 1.0) > kUnitTol)
        fail(Errc::not_unit_vector, "direction norm is " + std::to_string(norm));
    return Direction{v};
}

SchmidtState singlet_state() {
    SchmidtState s;
    s.singlet = true;
    return s;
}

SettingFamily named_family(const std::string& name) {
    const Direction zhat = make_direction(0, 0, 1);
    const Direction xhat = make_direction(1, 0, 0);
    const Direction diag_plus = make_direction(kInvSqrt2, 0, kInvSqrt2);
    const Direction diag_minus = make_direction(-kInvSqrt2, 0, kInvSqrt2);

    SettingFamily f;
    f.name = name;
    if (name == "bb84") {
        f.alice = {zhat, xhat};
        f.bob = {zhat, xhat};
        return f;
    }
    if (name == "chsh-protocol") {
        // Alice z/x, Bob the +-45 degree diagonals; the singlet is natively
        // anticorrelated, so Bob's output flip lands on the success
        // convention a xor b = x.y.
        f.alice = {zhat, xhat};
        f.bob = {diag_plus, diag_minus};
        f.flip_b = true;
        return f;
    }
    if (name == "chsh-optimal") {
        f.alice = {zhat, xhat};
        f.bob = {make_direction(-kInvSqrt2, 0, -kInvSqrt2),
                 make_direction(kInvSqrt2, 0, -kInvSqrt2)};
        return f;
    }
    fail(Errc::parse_error, "unknown setting family '" + name + "'");
}

nlohmann::ordered_json family_to_json(const SettingFamily& f) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["name"] = f.name;
    auto dirs = [](const std::vector<Direction>& list) {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const Direction& d : list)
            out.push_back({d.v.x, d.v.y, d.v.z});
        return out;
    };
    j["alice"] = dirs(f.alice);
    j["bob"] = dirs(f.bob);
    j["flip_a"] = f.flip_a;
    j["flip_b"] = f.flip_b;
    return j;
}

SettingFamily family_from_json(const nlohmann::ordered_json& j) {
    try {
        SettingFamily f;
        f.name = j.value("name", "inline");
        auto dirs = [](const nlohmann::ordered_json& list) {
            std::vector<Direction> out;
            for (const auto& d : list)
                out.push_back(make_direction(d.at(0).get<double>(), d.at(1).get<double>(),
                                             d.at(2).get<double>()));
            return out;
        };
        f.alice = dirs(j.at("alice"));
        f.bob = dirs(j.at("bob"));
        f.flip_a = j.value("flip_a", false);
        f.flip_b = j.value("flip_b", false);
        return f;
    } catch (const nlohmann::ordered_json::exception& e) {
        fail(Errc::parse_error, std::string("malformed setting family: ") + e.what());
    }
}

double correlator(const SchmidtState& state, const Direction& a, const Direction& b) {
    const double s2t = std::sin(2.0 * state.theta);
    if (state.singlet)
        return -(a.v.z * b.v.z + s2t * (a.v.x * b.v.x + a.v.y * b.v.y));
    return a.v.z * b.v.z + s2t * (a.v.x * b.v.x - a.v.y * b.v.y);
}

std::array<double, 4> singlet_correlation(const Direction& a, const Direction& b) {
    const double e = -dot(a.v, b.v);
    std::array<double, 4> p;
    for (int ab = 0; ab < 2; ++ab)
        for (int bb = 0; bb < 2; ++bb) {
            const double sa = ab == 0 ? 1.0 : -1.0;
            const double sb = bb == 0 ? 1.0 : -1.0;
            p[ab * 2 + bb] = (1.0 + sa * sb * e) / 4.0;
        }
    return p;
}

std::array<double, 4> schmidt_correlation(const SchmidtState& state, const Direction& a,
                                          const Direction& b) {
    const double c2t = std::cos(2.0 * state.theta);
    const double ea = c2t * a.v.z;
    const double eb = state.singlet ? -c2t * b.v.z : c2t * b.v.z;
    const double eab = correlator(state, a, b);
    std::array<double, 4> p;
    for (int ab = 0; ab < 2; ++ab)
        for (int bb = 0; bb < 2; ++bb) {
            const double sa = ab == 0 ? 1.0 : -1.0;
            const double sb = bb == 0 ? 1.0 : -1.0;
            p[ab * 2 + bb] = (1.0 + sa * ea + sb * eb + sa * sb * eab) / 4.0;
        }
    return p;
}

ChshMark chsh_mark_for_settings(const SchmidtState& state, const SettingFamily& family) {
    if (family.alice.size() != 2 || family.bob.size() != 2)
        fail(Errc::shape_mismatch, "CHSH needs two settings per party");

    const Scenario sc = Scenario::binary();
    std::vector<double> table(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const auto p = schmidt_correlation(state, family.alice[x], family.bob[y]);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const int ae = family.flip_a ? 1 - a : a;
                    const int be = family.flip_b ? 1 - b : b;
                    table[sc.index(x, y, ae, be)] = p[a * 2 + b];
                }
        }
    Correlation box = Correlation::validate(sc, std::move(table), 1e-12);

    double mark = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if ((a ^ b) == (x & y))
                        mark += box.value(x, y, a, b);
    return {mark, std::move(box)};
}

namespace {

struct Angles {
    // (polar, azimuth) per direction: a0, a1, b0, b1.
    std::array<double, 8> t;
};

Vec3 to_vec(double polar, double azimuth) {
    const double s = std::sin(polar);
    return Vec3{s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)};
}

double mark_of(const SchmidtState& state, const Angles& ang) {
    const Direction a0{to_vec(ang.t[0], ang.t[1])};
    const Direction a1{to_vec(ang.t[2], ang.t[3])};
    const Direction b0{to_vec(ang.t[4], ang.t[5])};
    const Direction b1{to_vec(ang.t[6], ang.t[7])};
    const double s = correlator(state, a0, b0) + correlator(state, a0, b1) +
                     correlator(state, a1, b0) - correlator(state, a1, b1);
    return 2.0 + std::abs(s) / 2.0;
}

double signed_s(const SchmidtState& state, const Angles& ang) {
    const Direction a0{to_vec(ang.t[0], ang.t[1])};
    const Direction a1{to_vec(ang.t[2], ang.t[3])};
    const Direction b0{to_vec(ang.t[4], ang.t[5])};
    const Direction b1{to_vec(ang.t[6], ang.t[7])};
    return correlator(state, a0, b0) + correlator(state, a0, b1) +
           correlator(state, a1, b0) - correlator(state, a1, b1);
}

} // namespace

double chsh_ceiling(const SchmidtState& state) {
    // Both conventions share the correlator singular values {1, sin 2t, sin 2t}.
    const double s2t = std::sin(2.0 * state.theta);
    return 2.0 + std::sqrt(1.0 + s2t * s2t);
}

MaxChshResult max_chsh(const SchmidtState& state, const SearchOptions& opts) {
    constexpr double kGolden = 0.61803398874989485;
    const std::uint64_t planned = static_cast<std::uint64_t>(opts.restarts) *
                                  (1 + static_cast<std::uint64_t>(opts.sweeps) * 8 *
                                           (opts.golden_iterations + 2));
    if (planned > opts.max_evaluations)
        fail(Errc::budget_exceeded, "search budget exceeds max_evaluations");

    MaxChshResult best;
    best.mark = -1.0;
    Angles best_ang{};
    std::uint64_t evals = 0;

    for (int r = 0; r < opts.restarts; ++r) {
        Angles ang{};
        for (int d = 0; d < 4; ++d) {
            const auto u = rng::unit_vector(opts.seed, static_cast<std::uint64_t>(r) * 4 + d,
                                            rng::kStreamSearch);
            ang.t[2 * d] = std::acos(u[2]);
            ang.t[2 * d + 1] = std::atan2(u[1], u[0]);
        }
        double value = mark_of(state, ang);
        ++evals;

        double width = 0.8;
        for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
            for (int k = 0; k < 8; ++k) {
                double lo = ang.t[k] - width;
                double hi = ang.t[k] + width;
                double x1 = hi - kGolden * (hi - lo);
                double x2 = lo + kGolden * (hi - lo);
                Angles probe = ang;
                probe.t[k] = x1;
                double f1 = mark_of(state, probe);
                probe.t[k] = x2;
                double f2 = mark_of(state, probe);
                evals += 2;
                for (int it = 0; it < opts.golden_iterations; ++it) {
                    if (f1 < f2) {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + kGolden * (hi - lo);
                        probe.t[k] = x2;
                        f2 = mark_of(state, probe);
                    } else {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - kGolden * (hi - lo);
                        probe.t[k] = x1;
                        f1 = mark_of(state, probe);
                    }
                    ++evals;
                }
                const double xm = f1 > f2 ? x1 : x2;
                const double fm = std::max(f1, f2);
                if (fm > value) {
                    ang.t[k] = xm;
                    value = fm;
                }
            }
            width *= 0.25;
        }

        if (value > best.mark) {
            best.mark = value;
            best_ang = ang;
        }
    }

    best.evaluations = evals;
    SettingFamily f;
    f.name = "search-best";
    f.alice = {Direction{to_vec(best_ang.t[0], best_ang.t[1])},
               Direction{to_vec(best_ang.t[2], best_ang.t[3])}};
    f.bob = {Direction{to_vec(best_ang.t[4], best_ang.t[5])},
             Direction{to_vec(best_ang.t[6], best_ang.t[7])}};
    if (signed_s(state, best_ang) < 0)
        f.flip_b = true;
    best.family = f;
    return best;
}

} // namespace nsbox::quantum

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsbox/correlation.hpp"
#include "nsbox/vec3.hpp"

namespace nsbox::quantum {

// Measurement direction on the Poincare sphere.
struct Direction {
    Vec3 v;
};

/// Validates unit norm within 1e-12.
Direction make_direction(double x, double y, double z);
Direction make_direction(const Vec3& v);

// Two-qubit pure state with Schmidt angle theta in [0, pi/4]. Two local-frame
// conventions: cos(theta)|00> + sin(theta)|11> (correlated, singlet = false)
// or cos(theta)|01> - sin(theta)|10> (anticorrelated, singlet = true). At
// theta = pi/4 the latter is the singlet with E = -a.b.
struct SchmidtState {
    double theta = 0.78539816339744831; // pi/4
    bool singlet = false;
};

SchmidtState singlet_state();

// Named measurement settings, one direction per input, with optional
// per-party output relabelings folded in.
struct SettingFamily {
    std::string name;
    std::vector<Direction> alice;
    std::vector<Direction> bob;
    bool flip_a = false;
    bool flip_b = false;
};

/// "chsh-optimal", "chsh-protocol" (diagonal bases plus the output flip that
/// lands on the standard success convention) or "bb84".
SettingFamily named_family(const std::string& name);

nlohmann::ordered_json family_to_json(const SettingFamily& f);
SettingFamily family_from_json(const nlohmann::ordered_json& j);

/// E[s_a s_b] for measurements along a and b.
double correlator(const SchmidtState& state, const Direction& a, const Direction& b);

/// Singlet outcome distribution, indexed a*2+b with spin +1 -> bit 0.
std::array<double, 4> singlet_correlation(const Direction& a, const Direction& b);

/// General Schmidt-state outcome distribution (closed form; validated against
/// the brute-force density-matrix oracle in the test suite).
std::array<double, 4> schmidt_correlation(const SchmidtState& state, const Direction& a,
                                          const Direction& b);

struct ChshMark {
    double mark = 0.0;
    Correlation box; // float mode, exactly no-signaling up to rounding
};

/// Builds the box for a two-input family and evaluates the CHSH mark.
ChshMark chsh_mark_for_settings(const SchmidtState& state, const SettingFamily& family);

struct SearchOptions {
    int restarts = 200;
    int sweeps = 4;           // refinement passes over the 8 angles
    int golden_iterations = 40;
    std::uint64_t seed = 1;
    std::uint64_t max_evaluations = 200'000'000;
};

struct MaxChshResult {
    double mark = 0.0;
    SettingFamily family;
    std::uint64_t evaluations = 0;
};

/// Seeded random restarts + coordinate-wise golden-section refinement over
/// the four direction angles.
MaxChshResult max_chsh(const SchmidtState& state, const SearchOptions& opts = {});

/// Closed-form ceiling 2 + sqrt(1 + sin^2(2 theta)).
double chsh_ceiling(const SchmidtState& state);

} // namespace nsbox::quantum

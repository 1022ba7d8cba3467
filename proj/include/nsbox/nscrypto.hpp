#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "nsbox/correlation.hpp"
#include "nsbox/polytope.hpp"

namespace nsbox::crypto {

// One-parameter mixture of the PR box with uniform noise.
struct IsotropicBox {
    Rational p_nl;
    Correlation box;
};

/// Exact table (1+p)/2 * PR + (1-p)/2 * uniform; p in [-1, 1].
IsotropicBox isotropic(const Rational& p);

/// Float-mode variant for irrational parameters.
Correlation isotropic_f(double p);

// Post-processed data after Alice announces x and Bob flips to b' = b xor x.y.
struct SiftedData {
    Correlation sifted; // table over (x, y, a, b')
};

SiftedData sift(const Correlation& corr);
/// Sifting already-sifted data changes nothing.
SiftedData sift(const SiftedData& data);

/// Average over uniform y of P(a != b' | x, y).
Rational qber_exact(const SiftedData& data, int x);
double qber(const SiftedData& data, int x);

/// Shannon mutual information (bits) of the sifted pair under uniform inputs.
double mutual_info_ab(const SiftedData& data);

// What Eve reads off a vertex she distributed, before inputs are announced
// (output_constant) or given the announced x (the sifted variants).
enum class KnowledgeRule {
    output_constant, // response independent of the party's input
    sifted_at_x0,    // b' = b: known iff Bob's map is constant
    sifted_at_x1,    // b' = b xor y: known iff Bob's map is anti-constant
};

struct AttackDecomposition {
    Decomposition decomposition; // over the canonical 24 vertices
    std::vector<bool> known;     // per decomposition entry
    Rational known_weight = 0;   // LP-optimal weight of Eve-known vertices
    double i_be_bits = 0.0;      // H(B) - H(B|E)
};

/// Optimal individual attack: the vertex decomposition maximizing the weight
/// Eve knows the target output of. PR-class vertices give her nothing.
AttackDecomposition eve_individual_attack(const Correlation& corr, Party target);

AttackDecomposition eve_attack_with_rule(const Correlation& corr, Party target,
                                         KnowledgeRule rule);

struct InfoDisturbanceReport {
    Rational i0, i1;             // Eve-known weight per announced x
    Rational qber0, qber1;
    Rational residual0, residual1; // |I_x - 2 QBER_{1-x}|
};

/// Information-gain versus disturbance identity; exact on the isotropic
/// family, reported without assertion elsewhere.
InfoDisturbanceReport info_disturbance_check(const Correlation& corr);

struct KeyRateReport {
    double p_nl = 0.0;
    double qber0 = 0.0, qber1 = 0.0;
    double i_ab = 0.0;
    double i_be = 0.0;
    double advantage = 0.0;
};

KeyRateReport key_rate_at(const Rational& p);

struct KeyAdvantageCurve {
    std::vector<KeyRateReport> rows;
    std::optional<double> crossing; // sign change of the advantage, 1e-6
};

KeyAdvantageCurve key_advantage_curve(const std::vector<Rational>& grid);

/// Bisection of the advantage sign change over [lo, hi] to 1e-6, attack LP at
/// every probe. nullopt when the sign does not change on the interval.
std::optional<double> advantage_crossing(double lo = 0.0, double hi = 1.0);

void curve_to_csv(std::ostream& out, const KeyAdvantageCurve& curve);

struct ProtocolComparison {
    double mark_bb84 = 0.0;
    double mark_chsh_protocol = 0.0;
    KeyRateReport bb84;          // attack on the exact BB84 box
    KeyRateReport chsh_protocol; // isotropic box at the measured mark
    bool bb84_secure = false;
    bool chsh_protocol_secure = false;
};

/// Correlation-level comparison of the BB84 settings (no Bell violation)
/// against the CHSH-protocol settings on the singlet.
ProtocolComparison bb84_vs_chsh_comparison();

nlohmann::ordered_json comparison_to_json(const ProtocolComparison& c);

} // namespace nsbox::crypto

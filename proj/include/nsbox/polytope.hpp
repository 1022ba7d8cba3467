#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nsbox/bell.hpp"
#include "nsbox/correlation.hpp"

namespace nsbox {

// One vertex of the binary no-signaling polytope, in canonical order:
// indices 0..15 are the deterministic strategies (lexicographic), 16..23 the
// PR-class boxes ordered by (alpha,beta,gamma).
struct NsVertex {
    int index = 0;
    bool nonlocal = false;
    DeterministicStrategy strategy; // local vertices
    int alpha = 0, beta = 0, gamma = 0; // nonlocal vertices
    Correlation box;
};

/// The PR-class box P(a,b|x,y) = 1/2 when a xor b = x.y xor alpha.x xor
/// beta.y xor gamma, else 0.
Correlation pr_class_vertex(int alpha, int beta, int gamma);

/// Shorthand for pr_class_vertex(0,0,0).
Correlation pr_box();

/// All 24 vertices of the binary no-signaling polytope.
const std::vector<NsVertex>& ns_vertex_list();

// Convex weights over an indexed vertex list reconstructing a box exactly.
struct Decomposition {
    std::vector<int> vertex_indices;   // canonical indices (see NsVertex)
    std::vector<Rational> weights;     // same length, >= 0, sum 1
    Rational residual = 0;             // exact reconstruction gap (0 here)
    Rational nonlocal_weight = 0;      // total weight on PR-class vertices
};

struct NonlocalityCertificate {
    BellFunctional functional;
    Rational achieved;
    Rational margin; // achieved - local bound, > 0
};

using LocalityResult = std::variant<Decomposition, NonlocalityCertificate>;

/// Exact LP membership in the local polytope. Returns a decomposition over
/// deterministic strategies, or a violated Bell functional. Float-mode binary
/// boxes are snapped onto the no-signaling subspace first (see README).
LocalityResult is_local(const Correlation& corr,
                        std::uint64_t cap = kDefaultStrategyCap);

/// Exact decomposition over the 24 binary NS vertices minimizing the total
/// nonlocal-vertex weight among all valid decompositions.
Decomposition decompose_ns(const Correlation& corr);

/// True iff the box is an extreme point of the binary NS polytope (the only
/// decomposition over the 24 candidates is the trivial one).
bool verify_vertex(const Correlation& corr);

/// Rebuild a box from a decomposition over the canonical 24 vertices.
Correlation recompose(const Decomposition& d);

/// Affine dimension of a set of rational boxes (exact Gaussian elimination).
int affine_dimension(const std::vector<Correlation>& boxes);

/// Exact rational no-signaling projection of a float-mode binary box:
/// marginals and joints are read off the table (averaging away the far-input
/// dependence) and converted to exact dyadic rationals. Entries pushed
/// slightly negative by rounding are absorbed by an epsilon uniform mix.
Correlation snap_binary_to_ns(const Correlation& corr, double tol = kDefaultTol);

} // namespace nsbox

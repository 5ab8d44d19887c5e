#ifndef PHICONV_CONVEXITY_HPP
#define PHICONV_CONVEXITY_HPP

#include <array>
#include <optional>
#include <vector>

#include "phiconv/core.hpp"
#include "phiconv/families.hpp"

namespace phiconv {

/// Outcome of a betweenness query. When the answer is notBetween, `witness`
/// carries coefficients of a functional phi with phi(x) <= phi(a),
/// phi(y) <= phi(a) and (phi(a)-phi(x)) + (phi(a)-phi(y)) >= 1.
struct BetweennessCertificate {
    bool between = false;
    std::optional<Vector> witness;
};

/// A functional certifying a strict (margin-1) maximum at `point` over the
/// domain it was computed on.
struct ExposureCertificate {
    int point = -1;
    Vector coefficients;
    double margin = 0.0;
};

struct ConvexityCheck {
    bool convex = true;
    std::optional<std::array<int, 3>> violating_triple; // (a, x, y)
};

struct ExposedPointsResult {
    std::vector<ExposureCertificate> certificates; // ascending point index
    bool separating = true;
    std::optional<std::pair<int, int>> non_separated_pair;

    IndexSet point_set(int cloud_size) const;
};

struct QuasiConvexityCheck {
    bool strictly_quasiconvex = true;
    std::optional<std::array<int, 3>> violating_triple; // (a, y, z)
};

/// Decides whether point a is Phi-between x and y. Since Phi is a linear
/// space, a is NOT between x,y exactly when the system
///   {u.c >= 0, v.c >= 0, (u+v).c >= 1},  u = g(a)-g(x), v = g(a)-g(y),
/// is feasible (any strict violator rescales to margin 1).
BetweennessCertificate is_between(int a, int x, int y, const FunctionFamily& family,
                                  const Tolerances& tol);

/// Brute-force scan of all triples in the domain: f is Phi-convex iff no
/// Phi-between point strictly dominates both flanking points. Betweenness
/// results are cached per (a, {x,y}); the affine kind uses the geometric
/// segment test instead of the LP.
ConvexityCheck is_phi_convex(const ScalarField& f, const IndexSet& domain,
                             const FunctionFamily& family, const Tolerances& tol);

/// Points of the domain outside the Phi-convex hull of the remaining points,
/// decided per point by the margin-1 separation LP.
IndexSet phi_extremal_points(const IndexSet& domain, const FunctionFamily& family,
                             const Tolerances& tol);

/// All points admitting a strict-maximum functional over the domain, with
/// certificates canonically scaled to margin 1. When the family separates the
/// domain the result is guaranteed nonempty.
ExposedPointsResult phi_exposed_points(const IndexSet& domain, const FunctionFamily& family,
                                       const Tolerances& tol);

/// {x in ambient : no phi in Phi has phi(x) > max_A phi}. Contains A.
IndexSet phi_convex_hull(const IndexSet& a_set, const IndexSet& ambient,
                         const FunctionFamily& family, const Tolerances& tol);

/// Checks f(a) < max(f(y), f(z)) - argmax_tie on every collinear triple of
/// the cloud (a strictly inside segment [y,z], all indices distinct).
/// Vacuously true on clouds without collinear triples.
QuasiConvexityCheck is_strictly_quasiconvex(const ScalarField& f, const PointCloud& cloud,
                                            const Tolerances& tol);

/// Certifying functional for `point` being a strict maximum over
/// domain \ {point}, or nullopt when none exists. Shared by the exposed-point
/// enumeration and the extremality certification in the bauer module.
std::optional<ExposureCertificate> try_expose(int point, const IndexSet& domain,
                                              const FunctionFamily& family,
                                              const Tolerances& tol);

} // namespace phiconv

#endif // PHICONV_CONVEXITY_HPP

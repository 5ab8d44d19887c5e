#ifndef PHICONV_BAUER_HPP
#define PHICONV_BAUER_HPP

#include <optional>
#include <vector>

#include "phiconv/convexity.hpp"
#include "phiconv/core.hpp"
#include "phiconv/families.hpp"

namespace phiconv {

/// A certified maximizer: Phi-extremal in the domain and in the argmax set of
/// every checked function.
struct BauerWitness {
    int point = -1;
    double max_value = 0.0;
    std::optional<ExposureCertificate> exposure; ///< from the argmax-set search
    int functions_checked = 0;
};

/// Maximum-principle witness for a single Phi-convex function: an exposed
/// point of argmax_set(f) that is Phi-extremal in the whole domain. The
/// search mirrors the chain PhiExp(M) within PhiExt(M) within PhiExt(K).
/// Throws NotPhiConvex when the (default-on) precondition check fails and
/// NoExposedPoint when the family does not separate the argmax set.
BauerWitness bauer_witness(const ScalarField& f, const IndexSet& domain,
                           const FunctionFamily& family, const Tolerances& tol,
                           bool check_convexity = true);

/// Common witness for a family of Phi-convex functions whose argmax sets
/// intersect. Throws EmptyIntersection when they do not (a report on the
/// hypothesis, not a failure of the search).
BauerWitness common_extremal_maximizer(const std::vector<ScalarField>& fs,
                                       const IndexSet& domain, const FunctionFamily& family,
                                       const Tolerances& tol, bool check_convexity = true);

/// Given functions all maximized at x, returns an extremal point e at which
/// every one of them also attains its maximum: a finite-sample certificate of
/// the cone absorption Omega_x within Omega_e. Throws PointNotMaximizer when
/// some function is not maximized at x.
BauerWitness omega_cone_witness(int x, const std::vector<ScalarField>& fs,
                                const IndexSet& domain, const FunctionFamily& family,
                                const Tolerances& tol, bool check_convexity = true);

} // namespace phiconv

#endif // PHICONV_BAUER_HPP

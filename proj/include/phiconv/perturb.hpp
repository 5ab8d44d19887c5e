#ifndef PHICONV_PERTURB_HPP
#define PHICONV_PERTURB_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "phiconv/convexity.hpp"
#include "phiconv/core.hpp"
#include "phiconv/families.hpp"

namespace phiconv {

struct PerturbationResult {
    Vector coefficients;      ///< phi in the family basis; f + phi is the perturbed field
    double rho_distance = 0.0; ///< rho_inf(f + phi, f), strictly below the requested epsilon
    int unique_point = -1;     ///< the unique maximizer of f + phi on the domain
    double gap = 0.0;          ///< (f+phi)(unique_point) - second best; +inf on singletons
};

/// Constructs a small phi in the family with f + phi uniquely maximized, by
/// scaling an exposing functional of the argmax set:
///   M = argmax_set(f); e in PhiExp(M) with margin-1 functional phi0;
///   t = min( (eps/(1-eps)) / (2 sup|phi0|),  G / (2 (osc+1)) ),  phi = t phi0,
/// where G is the value gap between M and the rest of the domain and osc the
/// oscillation of phi0 around e. All three postconditions (rho < eps, gap >=
/// unique_gap, uniqueness) are re-verified by replay; a replay gap below
/// unique_gap raises DegenerateGap rather than returning silently.
PerturbationResult perturb_to_unique_max(const ScalarField& f, const IndexSet& domain,
                                         const FunctionFamily& family, double epsilon,
                                         const Tolerances& tol);

/// Minimization form reached by sign flip: finds phi with f - phi uniquely
/// minimized over the finite part of f. This is the one consumer of
/// +infinity-bearing fields (indicator-style lower semicontinuous inputs);
/// infinite entries simply drop out of the working domain.
PerturbationResult perturb_to_unique_min(const ScalarField& f, const FunctionFamily& family,
                                         double epsilon, const Tolerances& tol);

/// Some x in the domain with f(x) > max{ f(q) : d(q, x) >= 1/n } + argmax_tie,
/// or nullopt. An empty far set qualifies argmax points vacuously. Candidates
/// are scanned in ascending index order.
std::optional<int> has_strong_max(const ScalarField& f, const IndexSet& domain, int n,
                                  const PointCloud& cloud, const Tolerances& tol);

struct GenericitySample {
    bool unique = false;
    int argmax = -1;   ///< lowest argmax index when not unique
    bool extremal = false;
};

struct GenericityReport {
    int samples = 0;
    double unique_fraction = 0.0;
    double extremal_fraction = 0.0; ///< over unique-argmax samples only; 0 when none
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::vector<GenericitySample> records;
};

/// Draws `samples` random perturbations from the epsilon-ball of the family
/// and reports how often f + phi has a unique argmax and how often that
/// argmax is Phi-extremal. Sample k is generated from a counter-based stream
/// derived from (seed, k), so the report is deterministic and independent of
/// evaluation order.
GenericityReport genericity_estimate(const ScalarField& f, const IndexSet& domain,
                                     const FunctionFamily& family, double epsilon,
                                     int samples, std::uint64_t seed, const Tolerances& tol);

/// The sampler behind genericity_estimate: direction uniform on the unit
/// sphere in coefficient space, radius a uniform fraction of eps/(1-eps)
/// measured in the effective norm max(family norm, sup norm), which keeps
/// rho_inf(phi, 0) <= eps for every family kind.
Vector sample_coefficient(const FunctionFamily& family, double epsilon, std::uint64_t seed,
                          int sample_index);

} // namespace phiconv

#endif // PHICONV_PERTURB_HPP

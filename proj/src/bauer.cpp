#include "phiconv/bauer.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace phiconv {

namespace {

// Exposed point of M (lowest index), certified Phi-extremal in the domain.
BauerWitness witness_from_argmax(const IndexSet& m_set, const IndexSet& domain,
                                 const FunctionFamily& family, const Tolerances& tol) {
    BauerWitness w;
    if (m_set.size() == 1) {
        w.point = m_set[0];
    } else {
        const ExposedPointsResult exposed = phi_exposed_points(m_set, family, tol);
        if (exposed.certificates.empty()) {
            const auto& pair = exposed.non_separated_pair;
            throw PhiError(ErrorKind::NoExposedPoint,
                           "family does not separate the argmax set" +
                               (pair ? " (points " + std::to_string(pair->first) + ", " +
                                           std::to_string(pair->second) + ")"
                                     : std::string()));
        }
        // Deterministic tie-break: certificates come in ascending point order.
        w.point = exposed.certificates.front().point;
        w.exposure = exposed.certificates.front();
    }
    if (!try_expose(w.point, domain, family, tol)) {
        throw PhiError(ErrorKind::WitnessNotExtremal,
                       "exposed point " + std::to_string(w.point) +
                           " of the argmax set is not extremal in the domain");
    }
    return w;
}

void check_convex_or_throw(const ScalarField& f, const IndexSet& domain,
                           const FunctionFamily& family, const Tolerances& tol,
                           int function_index) {
    const ConvexityCheck cc = is_phi_convex(f, domain, family, tol);
    if (cc.convex) return;
    const auto& t = *cc.violating_triple;
    throw PhiError(ErrorKind::NotPhiConvex,
                   "function " + std::to_string(function_index) +
                       " violates Phi-convexity at triple (" + std::to_string(t[0]) + ", " +
                       std::to_string(t[1]) + ", " + std::to_string(t[2]) + ")",
                   {function_index, t[0], t[1], t[2]});
}

double domain_max(const ScalarField& f, const IndexSet& domain) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i : domain) best = std::max(best, f.at(i));
    return best;
}

} // namespace

BauerWitness bauer_witness(const ScalarField& f, const IndexSet& domain,
                           const FunctionFamily& family, const Tolerances& tol,
                           bool check_convexity) {
    if (domain.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "bauer_witness over empty domain");
    }
    if (check_convexity) check_convex_or_throw(f, domain, family, tol, 0);

    const IndexSet m_set = argmax_set(f, domain, tol);
    BauerWitness w = witness_from_argmax(m_set, domain, family, tol);
    w.max_value = domain_max(f, domain);
    w.functions_checked = 1;
    return w;
}

BauerWitness common_extremal_maximizer(const std::vector<ScalarField>& fs,
                                       const IndexSet& domain, const FunctionFamily& family,
                                       const Tolerances& tol, bool check_convexity) {
    if (fs.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "need at least one function");
    }
    if (domain.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "empty domain");
    }
    if (check_convexity) {
        for (size_t i = 0; i < fs.size(); ++i) {
            check_convex_or_throw(fs[i], domain, family, tol, static_cast<int>(i));
        }
    }

    std::vector<int> common(domain.begin(), domain.end());
    for (const auto& f : fs) {
        const IndexSet m = argmax_set(f, domain, tol);
        std::vector<int> next;
        for (int i : common) {
            if (m.contains(i)) next.push_back(i);
        }
        common = std::move(next);
        if (common.empty()) {
            throw PhiError(ErrorKind::EmptyIntersection,
                           "the argmax sets have empty intersection");
        }
    }

    const IndexSet m_set = IndexSet::of(common, family.cloud_size());
    BauerWitness w = witness_from_argmax(m_set, domain, family, tol);
    w.functions_checked = static_cast<int>(fs.size());
    w.max_value = domain_max(fs.front(), domain);

    // Replay: the witness must attain the domain max of every function.
    for (size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].at(w.point) < domain_max(fs[i], domain) - tol.argmax_tie) {
            throw PhiError(ErrorKind::PointNotMaximizer,
                           "witness replay failed for function " + std::to_string(i));
        }
    }
    return w;
}

BauerWitness omega_cone_witness(int x, const std::vector<ScalarField>& fs,
                                const IndexSet& domain, const FunctionFamily& family,
                                const Tolerances& tol, bool check_convexity) {
    if (!domain.contains(x)) {
        throw PhiError(ErrorKind::InvalidArgument,
                       "x = " + std::to_string(x) + " is not in the domain");
    }
    for (size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].at(x) < domain_max(fs[i], domain) - tol.argmax_tie) {
            throw PhiError(ErrorKind::PointNotMaximizer,
                           "function " + std::to_string(i) + " is not maximized at " +
                               std::to_string(x),
                           {static_cast<int>(i), x});
        }
    }
    // x lies in every argmax set, so the intersection is nonempty.
    return common_extremal_maximizer(fs, domain, family, tol, check_convexity);
}

} // namespace phiconv

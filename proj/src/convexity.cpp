#include "phiconv/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "phiconv/linprog.hpp"

namespace phiconv {

namespace {

void check_index(int i, const FunctionFamily& family, const char* what) {
    if (i < 0 || i >= family.cloud_size()) {
        throw PhiError(ErrorKind::InvalidArgument,
                       std::string(what) + " index " + std::to_string(i) + " out of range");
    }
}

// Feasible witness of {(g(point) - g(q)).c >= 1 : q in others}, or nullopt.
std::optional<Vector> margin_separator(int point, const std::vector<int>& others,
                                       const FunctionFamily& family, const Tolerances& tol) {
    std::vector<LinearConstraint> constraints;
    constraints.reserve(others.size());
    const Vector gp = family.feature(point);
    for (int q : others) {
        constraints.push_back({gp - family.feature(q), Relation::GreaterEq, 1.0});
    }
    const FeasibilityResult res = feasible(constraints, tol);
    if (!res.feasible) return std::nullopt;
    Vector c = *res.witness;
    if (c.size() != family.dimension()) { // empty constraint list placeholder
        c = Vector::Zero(family.dimension());
    }
    return c;
}

} // namespace

IndexSet ExposedPointsResult::point_set(int cloud_size) const {
    std::vector<int> pts;
    pts.reserve(certificates.size());
    for (const auto& c : certificates) pts.push_back(c.point);
    return IndexSet::of(std::move(pts), cloud_size);
}

BetweennessCertificate is_between(int a, int x, int y, const FunctionFamily& family,
                                  const Tolerances& tol) {
    check_index(a, family, "a");
    check_index(x, family, "x");
    check_index(y, family, "y");

    const Vector u = family.feature(a) - family.feature(x);
    const Vector v = family.feature(a) - family.feature(y);
    std::vector<LinearConstraint> sys = {
        {u, Relation::GreaterEq, 0.0},
        {v, Relation::GreaterEq, 0.0},
        {u + v, Relation::GreaterEq, 1.0},
    };
    const FeasibilityResult res = feasible(sys, tol);
    if (!res.feasible) {
        return {true, std::nullopt};
    }
    // Canonical scaling: pin the summed margin at exactly 1.
    Vector c = *res.witness;
    const double s = (u + v).dot(c);
    if (s > 0.0) c /= s;
    return {false, c};
}

namespace {

// Betweenness restricted to what the convexity scan needs, with the affine
// fast path and a per-scan cache. Key symmetry: (a, x, y) == (a, y, x).
// The affine feature map is (1, p), so the geometric segment test on feature
// vectors decides affine betweenness without an LP.
class BetweennessOracle {
public:
    BetweennessOracle(const FunctionFamily& family, const Tolerances& tol)
        : family_(family), tol_(tol) {}

    bool between(int a, int x, int y) {
        if (x == a && y == a) return true;
        if (family_.kind() == FamilyKind::Affine) {
            if (a == x || a == y) return false; // distinct cloud points are separated
            return segment_member(family_.feature(a), family_.feature(x),
                                  family_.feature(y), tol_);
        }
        const auto key = std::make_tuple(a, std::min(x, y), std::max(x, y));
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const bool result = is_between(a, x, y, family_, tol_).between;
        cache_.emplace(key, result);
        return result;
    }

private:
    const FunctionFamily& family_;
    const Tolerances& tol_;
    std::map<std::tuple<int, int, int>, bool> cache_;
};

} // namespace

ConvexityCheck is_phi_convex(const ScalarField& f, const IndexSet& domain,
                             const FunctionFamily& family, const Tolerances& tol) {
    if (domain.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "convexity check over empty domain");
    }
    if (!f.finite_on(domain)) {
        throw PhiError(ErrorKind::InvalidArgument,
                       "convexity check requires f finite on the domain");
    }
    BetweennessOracle oracle(family, tol);
    const double tie = tol.argmax_tie;
    for (int a : domain) {
        for (int x : domain) {
            for (int y : domain) {
                if (y < x) continue; // (x,y) and (y,x) are the same condition
                if (x == a && y == a) continue;
                const double fa = f.at(a);
                const double fx = f.at(x);
                const double fy = f.at(y);
                const bool dominated = fx <= fa + tie && fy <= fa + tie;
                const bool strict =
                    std::max(std::abs(fx - fa), std::abs(fy - fa)) > tie;
                if (!dominated || !strict) continue;
                if (oracle.between(a, x, y)) {
                    return {false, std::array<int, 3>{a, x, y}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

IndexSet phi_extremal_points(const IndexSet& domain, const FunctionFamily& family,
                             const Tolerances& tol) {
    if (domain.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "extremal scan over empty domain");
    }
    std::vector<int> out;
    for (int a : domain) {
        std::vector<int> others;
        others.reserve(static_cast<size_t>(domain.size()) - 1);
        for (int q : domain) {
            if (q != a) others.push_back(q);
        }
        if (margin_separator(a, others, family, tol)) out.push_back(a);
    }
    return IndexSet::of(std::move(out), family.cloud_size());
}

std::optional<ExposureCertificate> try_expose(int point, const IndexSet& domain,
                                              const FunctionFamily& family,
                                              const Tolerances& tol) {
    check_index(point, family, "point");
    std::vector<int> others;
    for (int q : domain) {
        if (q != point) others.push_back(q);
    }
    if (others.empty()) {
        // Singleton domain: a strict maximum is vacuous.
        return ExposureCertificate{point, Vector::Zero(family.dimension()), 1.0};
    }
    auto c = margin_separator(point, others, family, tol);
    if (!c) return std::nullopt;

    // Canonical scaling: divide by the replayed minimum margin so the
    // certificate holds with margin exactly 1 up to roundoff.
    const Vector values = family.basis().transpose() * (*c);
    double mu = std::numeric_limits<double>::infinity();
    for (int q : others) mu = std::min(mu, values(point) - values(q));
    if (!(mu > 0.0)) {
        throw PhiError(ErrorKind::NoExposedPoint,
                       "separation witness failed replay at point " + std::to_string(point));
    }
    Vector scaled = *c / mu;
    const Vector rescaled_values = family.basis().transpose() * scaled;
    double margin = std::numeric_limits<double>::infinity();
    for (int q : others) margin = std::min(margin, rescaled_values(point) - rescaled_values(q));
    return ExposureCertificate{point, std::move(scaled), margin};
}

ExposedPointsResult phi_exposed_points(const IndexSet& domain, const FunctionFamily& family,
                                       const Tolerances& tol) {
    if (domain.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "exposed scan over empty domain");
    }
    ExposedPointsResult result;
    const SeparationResult sep = separates_points(family, domain);
    result.separating = sep.separates;
    result.non_separated_pair = sep.violating_pair;

    for (int a : domain) {
        if (auto cert = try_expose(a, domain, family, tol)) {
            result.certificates.push_back(std::move(*cert));
        }
    }
    if (result.separating && result.certificates.empty()) {
        throw PhiError(ErrorKind::NoExposedPoint,
                       "separating family produced no exposed point (numerical failure)");
    }
    return result;
}

IndexSet phi_convex_hull(const IndexSet& a_set, const IndexSet& ambient,
                         const FunctionFamily& family, const Tolerances& tol) {
    if (a_set.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "hull of an empty set");
    }
    for (int a : a_set) {
        if (!ambient.contains(a)) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "hull generator " + std::to_string(a) + " outside the ambient set");
        }
    }
    std::vector<int> out(a_set.begin(), a_set.end());
    for (int x : ambient) {
        if (a_set.contains(x)) continue;
        if (!margin_separator(x, a_set.values(), family, tol)) out.push_back(x);
    }
    return IndexSet::of(std::move(out), family.cloud_size());
}

QuasiConvexityCheck is_strictly_quasiconvex(const ScalarField& f, const PointCloud& cloud,
                                            const Tolerances& tol) {
    if (f.size() != cloud.size()) {
        throw PhiError(ErrorKind::SizeMismatch, "field size != cloud size");
    }
    if (!f.finite_on(IndexSet::full(cloud.size()))) {
        throw PhiError(ErrorKind::InvalidArgument, "strict quasi-convexity requires finite f");
    }
    const int n = cloud.size();
    for (int a = 0; a < n; ++a) {
        for (int y = 0; y < n; ++y) {
            if (y == a) continue;
            for (int z = y + 1; z < n; ++z) {
                if (z == a) continue;
                if (!segment_member(cloud.point(a), cloud.point(y), cloud.point(z), tol)) {
                    continue;
                }
                if (!(f.at(a) < std::max(f.at(y), f.at(z)) - tol.argmax_tie)) {
                    return {false, std::array<int, 3>{a, y, z}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

} // namespace phiconv

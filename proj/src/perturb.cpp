#include "phiconv/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace phiconv {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw PhiError(ErrorKind::BadEpsilon, "epsilon must lie in (0, 1)");
    }
}

struct TopTwo {
    int best_index = -1;
    double best = -std::numeric_limits<double>::infinity();
    double second = -std::numeric_limits<double>::infinity();
};

TopTwo top_two(const Vector& values, const IndexSet& domain) {
    TopTwo t;
    for (int i : domain) {
        const double v = values(i);
        if (v > t.best) {
            t.second = t.best;
            t.best = v;
            t.best_index = i;
        } else if (v > t.second) {
            t.second = v;
        }
    }
    return t;
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

PerturbationResult perturb_to_unique_max(const ScalarField& f, const IndexSet& domain,
                                         const FunctionFamily& family, double epsilon,
                                         const Tolerances& tol) {
    check_epsilon(epsilon);
    if (domain.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "perturbation over empty domain");
    }
    if (!f.finite_on(domain)) {
        throw PhiError(ErrorKind::InvalidArgument, "f must be finite on the domain");
    }

    PerturbationResult result;
    result.coefficients = Vector::Zero(family.dimension());

    const TopTwo base = top_two(f.values(), domain);
    if (domain.size() == 1) {
        result.unique_point = base.best_index;
        result.gap = std::numeric_limits<double>::infinity();
        return result;
    }

    const IndexSet m_set = argmax_set(f, domain, tol);
    if (m_set.size() == 1 && base.best - base.second >= tol.unique_gap) {
        result.unique_point = base.best_index;
        result.gap = base.best - base.second;
        return result;
    }

    const ExposedPointsResult exposed = phi_exposed_points(m_set, family, tol);
    if (exposed.certificates.empty()) {
        throw PhiError(ErrorKind::NoExposedPoint,
                       "family does not separate the argmax set");
    }
    const ExposureCertificate& cert = exposed.certificates.front();
    const int e = cert.point;
    const Vector phi0 = (family.basis().transpose() * cert.coefficients).eval();

    // Value gap between the argmax set and the rest of the domain.
    double big_gap = std::numeric_limits<double>::infinity();
    for (int q : domain) {
        if (!m_set.contains(q)) big_gap = std::min(big_gap, base.best - f.at(q));
    }
    double osc = 0.0;
    for (int q : domain) osc = std::max(osc, std::abs(phi0(q) - phi0(e)));
    const double sup0 = phi0.cwiseAbs().maxCoeff();

    const double budget = epsilon / (1.0 - epsilon);
    double t = big_gap / (2.0 * (osc + 1.0));
    if (sup0 > 0.0) t = std::min(t, budget / (2.0 * sup0));
    if (!std::isfinite(t)) t = 0.0; // zero functional on a flat field

    result.coefficients = t * cert.coefficients;
    const Vector perturbed = f.values() + t * phi0;

    // Replay all three postconditions.
    const TopTwo after = top_two(perturbed, domain);
    result.unique_point = after.best_index;
    result.gap = after.best - after.second;
    const double sup = t * sup0;
    result.rho_distance = sup / (1.0 + sup);
    if (after.best_index != e || result.gap < tol.unique_gap) {
        throw PhiError(ErrorKind::DegenerateGap,
                       "replayed gap " + std::to_string(result.gap) +
                           " below unique_gap (tolerance interplay)");
    }
    if (!(result.rho_distance < epsilon)) {
        throw PhiError(ErrorKind::DegenerateGap, "perturbation exceeded the rho budget");
    }
    return result;
}

PerturbationResult perturb_to_unique_min(const ScalarField& f, const FunctionFamily& family,
                                         double epsilon, const Tolerances& tol) {
    check_epsilon(epsilon);
    if (f.size() != family.cloud_size()) {
        throw PhiError(ErrorKind::SizeMismatch, "field size != family cloud size");
    }
    // The finite part of f is the working domain; +infinity entries (the
    // indicator delta_C construction) never reach the maximization core.
    std::vector<int> finite;
    Vector negated = Vector::Zero(f.size());
    for (int i = 0; i < f.size(); ++i) {
        if (std::isfinite(f.at(i))) {
            finite.push_back(i);
            negated(i) = -f.at(i);
        }
    }
    const IndexSet domain = IndexSet::of(std::move(finite), f.size());
    // Minimizing f - phi equals maximizing (-f) + phi.
    return perturb_to_unique_max(ScalarField(negated), domain, family, epsilon, tol);
}

std::optional<int> has_strong_max(const ScalarField& f, const IndexSet& domain, int n,
                                  const PointCloud& cloud, const Tolerances& tol) {
    if (n < 1) {
        throw PhiError(ErrorKind::InvalidArgument, "n must be >= 1");
    }
    if (domain.empty() || !f.finite_on(domain)) {
        throw PhiError(ErrorKind::InvalidArgument, "strong-max needs finite f on a domain");
    }
    const double radius = 1.0 / n;
    const IndexSet maxima = argmax_set(f, domain, tol);
    for (int x : domain) {
        double far_best = -std::numeric_limits<double>::infinity();
        bool far_empty = true;
        for (int q : domain) {
            if (cloud.distance(q, x) >= radius) {
                far_empty = false;
                far_best = std::max(far_best, f.at(q));
            }
        }
        if (far_empty) {
            if (maxima.contains(x)) return x;
        } else if (f.at(x) > far_best + tol.argmax_tie) {
            return x;
        }
    }
    return std::nullopt;
}

Vector sample_coefficient(const FunctionFamily& family, double epsilon, std::uint64_t seed,
                          int sample_index) {
    check_epsilon(epsilon);
    const int m = family.dimension();

    // Counter-based stream: the generator state depends only on (seed, k).
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(sample_index))));
    auto uniform01 = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };

    Vector direction(m);
    for (;;) {
        // Box-Muller pairs; spelled out so the stream is library-independent.
        for (int j = 0; j < m; j += 2) {
            const double u1 = uniform01();
            const double u2 = uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            direction(j) = r * std::cos(2.0 * std::numbers::pi * u2);
            if (j + 1 < m) direction(j + 1) = r * std::sin(2.0 * std::numbers::pi * u2);
        }
        const double norm = direction.norm();
        if (norm > 1e-300) {
            direction /= norm;
            break;
        }
    }

    const double fraction = uniform01();
    const double budget = epsilon / (1.0 - epsilon);
    // Effective norm: the family norm bounds the draw to the requested ball,
    // the sup norm keeps rho_inf(phi, 0) <= eps even for Lip-norm families.
    const double fam = family_norm(family, direction);
    const double sup = (family.basis().transpose() * direction).cwiseAbs().maxCoeff();
    const double effective = std::max(fam, sup);
    if (effective <= 0.0) {
        return Vector::Zero(m);
    }
    return direction * (fraction * budget / effective);
}

GenericityReport genericity_estimate(const ScalarField& f, const IndexSet& domain,
                                     const FunctionFamily& family, double epsilon,
                                     int samples, std::uint64_t seed, const Tolerances& tol) {
    check_epsilon(epsilon);
    if (samples < 1) {
        throw PhiError(ErrorKind::InvalidArgument, "samples must be >= 1");
    }
    if (domain.empty() || !f.finite_on(domain)) {
        throw PhiError(ErrorKind::InvalidArgument, "genericity needs finite f on a domain");
    }

    const IndexSet extremal = phi_extremal_points(domain, family, tol);

    GenericityReport report;
    report.samples = samples;
    report.seed = seed;
    report.epsilon = epsilon;
    report.records.reserve(static_cast<size_t>(samples));

    int unique_count = 0;
    int unique_extremal_count = 0;
    for (int k = 0; k < samples; ++k) {
        const Vector c = sample_coefficient(family, epsilon, seed, k);
        const Vector g = f.values() + family.basis().transpose() * c;
        const TopTwo t = top_two(g, domain);
        GenericitySample row;
        row.unique = (domain.size() > 1) ? (t.best - t.second >= tol.unique_gap) : true;
        row.argmax = t.best_index;
        if (row.unique) {
            ++unique_count;
            row.extremal = extremal.contains(t.best_index);
            if (row.extremal) ++unique_extremal_count;
        }
        report.records.push_back(row);
    }
    report.unique_fraction = static_cast<double>(unique_count) / samples;
    report.extremal_fraction =
        unique_count > 0 ? static_cast<double>(unique_extremal_count) / unique_count : 0.0;
    return report;
}

} // namespace phiconv

#ifndef PHICONV_TEST_HELPERS_HPP
#define PHICONV_TEST_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "phiconv/core.hpp"
#include "phiconv/linprog.hpp"

namespace phiconv::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Uniform points in [0,1]^dim. Coordinates are generic with probability 1.
inline PointCloud random_cloud(Rng& rng, int n_points, int dim = 2) {
    Matrix pts(n_points, dim);
    for (int i = 0; i < n_points; ++i) {
        for (int k = 0; k < dim; ++k) pts(i, k) = uniform(rng);
    }
    return PointCloud::euclidean(std::move(pts));
}

/// Unit square corners (0,0), (1,0), (1,1), (0,1); optionally plus the center.
inline PointCloud square_cloud(bool with_center = false) {
    Matrix pts(with_center ? 5 : 4, 2);
    pts.row(0) << 0, 0;
    pts.row(1) << 1, 0;
    pts.row(2) << 1, 1;
    pts.row(3) << 0, 1;
    if (with_center) pts.row(4) << 0.5, 0.5;
    return PointCloud::euclidean(std::move(pts));
}

/// f(p) = p^T Q p + b . p evaluated on the cloud.
inline ScalarField quadratic_field(const PointCloud& cloud, const Matrix& q, const Vector& b) {
    Vector out(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
        const Vector p = cloud.point(i);
        out(i) = p.dot(q * p) + b.dot(p);
    }
    return ScalarField(out);
}

/// Random positive-semidefinite Q (as A^T A) and random b.
inline ScalarField random_convex_quadratic(Rng& rng, const PointCloud& cloud) {
    const int n = cloud.dim();
    Matrix a(n, n);
    Vector b(n);
    for (int r = 0; r < n; ++r) {
        b(r) = uniform(rng, -1.0, 1.0);
        for (int c = 0; c < n; ++c) a(r, c) = uniform(rng, -1.0, 1.0);
    }
    return quadratic_field(cloud, a.transpose() * a, b);
}

/// Andrew monotone chain on a 2D cloud. Returns the hull vertex indices
/// (strict turns only, so collinear edge points are excluded), sorted.
inline std::vector<int> monotone_chain_vertices(const PointCloud& cloud) {
    const int n = cloud.size();
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (cloud.points()(i, 0) != cloud.points()(j, 0)) {
            return cloud.points()(i, 0) < cloud.points()(j, 0);
        }
        return cloud.points()(i, 1) < cloud.points()(j, 1);
    });
    auto cross = [&](int o, int a, int b) {
        const double ox = cloud.points()(o, 0), oy = cloud.points()(o, 1);
        return (cloud.points()(a, 0) - ox) * (cloud.points()(b, 1) - oy) -
               (cloud.points()(a, 1) - oy) * (cloud.points()(b, 0) - ox);
    };
    std::vector<int> hull;
    for (int pass = 0; pass < 2; ++pass) {
        const size_t start = hull.size();
        const auto& seq = order;
        for (size_t t = 0; t < seq.size(); ++t) {
            const int i = pass == 0 ? seq[t] : seq[seq.size() - 1 - t];
            while (hull.size() >= start + 2 &&
                   cross(hull[hull.size() - 2], hull[hull.size() - 1], i) <= 0.0) {
                hull.pop_back();
            }
            hull.push_back(i);
        }
        hull.pop_back(); // last point repeats as the next pass's first
    }
    std::sort(hull.begin(), hull.end());
    hull.erase(std::unique(hull.begin(), hull.end()), hull.end());
    return hull;
}

struct OracleLP {
    bool found = false;
    double value = 0.0;
};

/// Brute-force LP oracle: enumerates all square subsystems of the constraint
/// rows (bounds included) as candidate vertices and keeps the feasible best.
/// Only meaningful for LPs whose optimum sits at a vertex (bounded ones).
inline OracleLP enumerate_vertices(const LPProblem& p, double feas_tol = 1e-7) {
    const int m = static_cast<int>(p.objective.size());
    std::vector<LinearConstraint> rows = p.constraints;
    for (int j = 0; j < static_cast<int>(p.bounds.size()); ++j) {
        Vector e = Vector::Zero(m);
        e(j) = 1.0;
        if (p.bounds[j].lower) rows.push_back({e, Relation::GreaterEq, *p.bounds[j].lower});
        if (p.bounds[j].upper) rows.push_back({e, Relation::LessEq, *p.bounds[j].upper});
    }
    const int r = static_cast<int>(rows.size());
    OracleLP best;
    std::vector<int> pick(static_cast<size_t>(m));

    auto feasible_point = [&](const Vector& x) {
        for (const auto& c : rows) {
            const double lhs = c.row.dot(x);
            if (c.rel == Relation::LessEq && lhs > c.rhs + feas_tol) return false;
            if (c.rel == Relation::GreaterEq && lhs < c.rhs - feas_tol) return false;
            if (c.rel == Relation::Equal && std::abs(lhs - c.rhs) > feas_tol) return false;
        }
        return true;
    };

    auto consider = [&](const Vector& x) {
        if (!x.allFinite() || !feasible_point(x)) return;
        const double v = p.objective.dot(x);
        const bool better = p.sense == Sense::Maximize ? v > best.value : v < best.value;
        if (!best.found || better) {
            best.found = true;
            best.value = v;
        }
    };

    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == m) {
            Matrix a(m, m);
            Vector b(m);
            for (int k = 0; k < m; ++k) {
                a.row(k) = rows[static_cast<size_t>(pick[static_cast<size_t>(k)])].row;
                b(k) = rows[static_cast<size_t>(pick[static_cast<size_t>(k)])].rhs;
            }
            const Eigen::FullPivLU<Matrix> lu(a);
            if (lu.isInvertible()) consider(lu.solve(b));
            return;
        }
        for (int i = start; i < r; ++i) {
            pick[static_cast<size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (r >= m) rec(0, 0);
    return best;
}

/// Convex hull of 2D points as a CCW polygon (indices into `pts`).
inline std::vector<int> hull_polygon_2d(const std::vector<Vector>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const auto& a = pts[static_cast<size_t>(i)];
        const auto& b = pts[static_cast<size_t>(j)];
        return a(0) != b(0) ? a(0) < b(0) : a(1) < b(1);
    });
    auto cross = [&](int o, int a, int b) {
        const auto& po = pts[static_cast<size_t>(o)];
        const auto& pa = pts[static_cast<size_t>(a)];
        const auto& pb = pts[static_cast<size_t>(b)];
        return (pa(0) - po(0)) * (pb(1) - po(1)) - (pa(1) - po(1)) * (pb(0) - po(0));
    };
    std::vector<int> hull;
    for (int pass = 0; pass < 2; ++pass) {
        const size_t start = hull.size();
        for (size_t t = 0; t < order.size(); ++t) {
            const int i = pass == 0 ? order[t] : order[order.size() - 1 - t];
            while (hull.size() >= start + 2 &&
                   cross(hull[hull.size() - 2], hull[hull.size() - 1], i) <= 0.0) {
                hull.pop_back();
            }
            hull.push_back(i);
        }
        hull.pop_back();
    }
    return hull; // CCW, no repeated endpoint
}

/// Point inside (or on) the convex hull of 2D points, by edge cross products.
inline bool point_in_hull_2d(const Vector& p, const std::vector<Vector>& pts,
                             double tol = 1e-9) {
    if (pts.size() == 1) return (p - pts[0]).norm() <= tol;
    const std::vector<int> poly = hull_polygon_2d(pts);
    if (poly.size() <= 2) {
        // Degenerate hull: distance to the segment between the two extremes.
        const Vector& a = pts[static_cast<size_t>(poly.front())];
        const Vector& b = pts[static_cast<size_t>(poly.back())];
        const Vector d = b - a;
        const double len2 = d.squaredNorm();
        const double lambda =
            len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
        return (p - (a + lambda * d)).norm() <= tol;
    }
    for (size_t k = 0; k < poly.size(); ++k) {
        const Vector& a = pts[static_cast<size_t>(poly[k])];
        const Vector& b = pts[static_cast<size_t>(poly[(k + 1) % poly.size()])];
        const double cross =
            (b(0) - a(0)) * (p(1) - a(1)) - (b(1) - a(1)) * (p(0) - a(0));
        if (cross < -tol) return false;
    }
    return true;
}

/// Independent geometric oracle for linear-family betweenness: feature vector
/// of a strictly inside the feature segment (x, y), or all three coincide.
inline bool feature_between_oracle(const Vector& ga, const Vector& gx, const Vector& gy,
                                   double tol = 1e-9) {
    const Vector u = ga - gx;
    const Vector v = ga - gy;
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu <= tol && nv <= tol) return true;
    if (nu <= tol || nv <= tol) return false;
    // Between iff v = -t u for some t > 0.
    const Vector residual = v + (nv / nu) * u;
    return residual.norm() <= tol * std::max(1.0, std::max(nu, nv));
}

} // namespace phiconv::testing

#endif // PHICONV_TEST_HELPERS_HPP

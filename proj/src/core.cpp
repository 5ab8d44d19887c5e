#include "phiconv/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace phiconv {

namespace {
// Distinctness tolerance for cloud points, in Euclidean distance.
constexpr double kDedupTol = 1e-12;
// Allowed slack on metric axioms of an explicit distance matrix.
constexpr double kMetricTol = 1e-9;
} // namespace

void Tolerances::validate() const {
    for (double t : {lp_feas, argmax_tie, unique_gap, geom_tol}) {
        if (!(t > 0.0) || !(t < 1e-3) || !std::isfinite(t)) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "tolerances must lie strictly in (0, 1e-3)");
        }
    }
}

IndexSet IndexSet::of(std::vector<int> indices, int size) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (int i : indices) {
        if (i < 0 || i >= size) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "index " + std::to_string(i) + " outside cloud of size " +
                               std::to_string(size));
        }
    }
    IndexSet s;
    s.indices_ = std::move(indices);
    return s;
}

IndexSet IndexSet::full(int size) {
    IndexSet s;
    s.indices_.resize(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) s.indices_[static_cast<size_t>(i)] = i;
    return s;
}

bool IndexSet::contains(int i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

PointCloud::PointCloud(Matrix points, Matrix distances, bool explicit_metric)
    : points_(std::move(points)), distances_(std::move(distances)),
      explicit_metric_(explicit_metric) {}

namespace {

void check_points(const Matrix& pts) {
    if (pts.rows() < 2) {
        throw PhiError(ErrorKind::InvalidArgument, "cloud needs at least 2 points");
    }
    if (pts.cols() < 1) {
        throw PhiError(ErrorKind::InvalidArgument, "ambient dimension must be positive");
    }
    if (!pts.allFinite()) {
        throw PhiError(ErrorKind::InvalidArgument, "point coordinates must be finite");
    }
    for (int i = 0; i < pts.rows(); ++i) {
        for (int j = i + 1; j < pts.rows(); ++j) {
            if ((pts.row(i) - pts.row(j)).norm() <= kDedupTol) {
                throw PhiError(ErrorKind::InvalidArgument,
                               "duplicate points " + std::to_string(i) + " and " +
                                   std::to_string(j),
                               {i, j});
            }
        }
    }
}

Matrix euclidean_distances(const Matrix& pts) {
    const int n = static_cast<int>(pts.rows());
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            d(i, j) = d(j, i) = (pts.row(i) - pts.row(j)).norm();
        }
    }
    return d;
}

void check_metric(const Matrix& d, int n) {
    if (d.rows() != n || d.cols() != n) {
        throw PhiError(ErrorKind::SizeMismatch, "distance matrix must be N x N");
    }
    if (!d.allFinite()) {
        throw PhiError(ErrorKind::InvalidArgument, "distances must be finite");
    }
    for (int i = 0; i < n; ++i) {
        if (std::abs(d(i, i)) > kMetricTol) {
            throw PhiError(ErrorKind::InvalidArgument, "distance matrix diagonal must be zero");
        }
        for (int j = 0; j < n; ++j) {
            if (i != j && d(i, j) <= 0.0) {
                throw PhiError(ErrorKind::InvalidArgument,
                               "off-diagonal distances must be positive");
            }
            if (std::abs(d(i, j) - d(j, i)) > kMetricTol) {
                throw PhiError(ErrorKind::InvalidArgument, "distance matrix must be symmetric");
            }
            for (int k = 0; k < n; ++k) {
                if (d(i, j) > d(i, k) + d(k, j) + kMetricTol) {
                    throw PhiError(ErrorKind::InvalidArgument,
                                   "triangle inequality violated at (" + std::to_string(i) +
                                       "," + std::to_string(j) + "," + std::to_string(k) + ")");
                }
            }
        }
    }
}

} // namespace

PointCloud PointCloud::euclidean(Matrix points) {
    check_points(points);
    Matrix d = euclidean_distances(points);
    return PointCloud(std::move(points), std::move(d), false);
}

PointCloud PointCloud::with_metric(Matrix points, Matrix distances) {
    check_points(points);
    check_metric(distances, static_cast<int>(points.rows()));
    // Symmetrize exactly so downstream code can rely on d(i,j) == d(j,i).
    Matrix d = 0.5 * (distances + distances.transpose());
    d.diagonal().setZero();
    return PointCloud(std::move(points), std::move(d), true);
}

ScalarField::ScalarField(Vector values, bool allows_infinity)
    : values_(std::move(values)), allows_infinity_(allows_infinity) {
    if (values_.size() == 0) {
        throw PhiError(ErrorKind::InvalidArgument, "field must be nonempty");
    }
    bool any_finite = false;
    for (int i = 0; i < values_.size(); ++i) {
        const double v = values_(i);
        if (std::isnan(v)) {
            throw PhiError(ErrorKind::InvalidArgument, "field value is NaN");
        }
        if (v == -std::numeric_limits<double>::infinity()) {
            throw PhiError(ErrorKind::InvalidArgument, "-infinity is never permitted");
        }
        if (v == std::numeric_limits<double>::infinity()) {
            if (!allows_infinity_) {
                throw PhiError(ErrorKind::InvalidArgument,
                               "+infinity requires the allows_infinity flag");
            }
        } else {
            any_finite = true;
        }
    }
    if (!any_finite) {
        throw PhiError(ErrorKind::InvalidArgument, "field needs at least one finite value");
    }
}

bool ScalarField::finite_on(const IndexSet& domain) const {
    for (int i : domain) {
        if (!std::isfinite(values_(i))) return false;
    }
    return true;
}

double rho_inf_distance(const ScalarField& f, const ScalarField& g) {
    if (f.size() != g.size()) {
        throw PhiError(ErrorKind::SizeMismatch, "fields have different sizes");
    }
    double sup = 0.0;
    for (int i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f.at(i)) || !std::isfinite(g.at(i))) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "rho_inf_distance requires finite fields");
        }
        sup = std::max(sup, std::abs(f.at(i) - g.at(i)));
    }
    // t/(1+t) is increasing, so the sup of the ratios is the ratio of the sup.
    return sup / (1.0 + sup);
}

IndexSet argmax_set(const ScalarField& f, const IndexSet& domain, const Tolerances& tol) {
    if (domain.empty()) {
        throw PhiError(ErrorKind::InvalidArgument, "argmax over empty domain");
    }
    if (!f.finite_on(domain)) {
        throw PhiError(ErrorKind::InvalidArgument, "argmax requires f finite on the domain");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int i : domain) best = std::max(best, f.at(i));
    std::vector<int> out;
    for (int i : domain) {
        if (f.at(i) >= best - tol.argmax_tie) out.push_back(i);
    }
    return IndexSet::of(std::move(out), f.size());
}

bool segment_member(const Vector& a, const Vector& x, const Vector& y, const Tolerances& tol) {
    if (a.size() != x.size() || a.size() != y.size()) {
        throw PhiError(ErrorKind::SizeMismatch, "segment_member: dimension mismatch");
    }
    const Vector dir = x - y;
    const double len2 = dir.squaredNorm();
    double lambda = 0.0;
    if (len2 > 0.0) {
        lambda = std::clamp((a - y).dot(dir) / len2, 0.0, 1.0);
    }
    const Vector closest = lambda * x + (1.0 - lambda) * y;
    return (a - closest).norm() <= tol.geom_tol;
}

} // namespace phiconv

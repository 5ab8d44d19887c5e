#ifndef PHICONV_CORE_HPP
#define PHICONV_CORE_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "phiconv/errors.hpp"

namespace phiconv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical tolerances shared by all modules. All must be in (0, 1e-3).
struct Tolerances {
    double lp_feas = 1e-9;    ///< feasibility slack accepted by the LP kernel
    double argmax_tie = 1e-9; ///< absolute tie width when extracting argmax sets
    double unique_gap = 1e-9; ///< gap certifying a unique maximizer
    double geom_tol = 1e-9;   ///< distance tolerance of geometric predicates

    void validate() const;
};

/// Sorted set of distinct cloud indices in [0, N).
class IndexSet {
public:
    IndexSet() = default;

    /// Sorts, deduplicates, and range-checks against a cloud of `size` points.
    static IndexSet of(std::vector<int> indices, int size);
    /// The full index set {0, ..., size-1}.
    static IndexSet full(int size);

    int size() const { return static_cast<int>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    bool contains(int i) const;
    int operator[](int k) const { return indices_[static_cast<size_t>(k)]; }

    std::vector<int>::const_iterator begin() const { return indices_.begin(); }
    std::vector<int>::const_iterator end() const { return indices_.end(); }
    const std::vector<int>& values() const { return indices_; }

    bool operator==(const IndexSet& other) const { return indices_ == other.indices_; }

private:
    std::vector<int> indices_;
};

/// A finite metric space: N points in Euclidean n-space, with either the
/// Euclidean metric or an explicit distance matrix. Indices 0..N-1 are the
/// canonical identifiers used everywhere downstream. Immutable once built.
class PointCloud {
public:
    /// Points as rows of an N x n matrix, Euclidean metric.
    static PointCloud euclidean(Matrix points);
    /// Points plus an explicit N x N symmetric distance matrix.
    static PointCloud with_metric(Matrix points, Matrix distances);

    int size() const { return static_cast<int>(points_.rows()); }
    int dim() const { return static_cast<int>(points_.cols()); }
    Vector point(int i) const { return points_.row(i).transpose(); }
    const Matrix& points() const { return points_; }

    double distance(int i, int j) const { return distances_(i, j); }
    const Matrix& distance_matrix() const { return distances_; }
    double diameter() const { return distances_.maxCoeff(); }
    bool has_explicit_metric() const { return explicit_metric_; }

private:
    PointCloud(Matrix points, Matrix distances, bool explicit_metric);

    Matrix points_;    // N x n
    Matrix distances_; // N x N
    bool explicit_metric_;
};

/// A real value per cloud point. +infinity entries are permitted only when
/// `allows_infinity` is set (indicator-style lower semicontinuous fields);
/// -infinity is never permitted.
class ScalarField {
public:
    ScalarField(Vector values, bool allows_infinity = false);

    int size() const { return static_cast<int>(values_.size()); }
    double at(int i) const { return values_(i); }
    double operator()(int i) const { return values_(i); }
    const Vector& values() const { return values_; }
    bool allows_infinity() const { return allows_infinity_; }

    bool finite_on(const IndexSet& domain) const;

private:
    Vector values_;
    bool allows_infinity_;
};

/// rho_inf(f,g) = sup_x |f(x)-g(x)| / (1 + |f(x)-g(x)|). Requires both fields
/// finite and of equal size; the result lies in [0, 1).
double rho_inf_distance(const ScalarField& f, const ScalarField& g);

/// All indices i in `domain` with f(i) >= max_domain f - tol.argmax_tie.
/// Never empty.
IndexSet argmax_set(const ScalarField& f, const IndexSet& domain, const Tolerances& tol);

/// True iff some lambda in [0,1] has ||a - (lambda x + (1-lambda) y)|| <= tol.geom_tol.
/// lambda is computed by projecting a onto the segment.
bool segment_member(const Vector& a, const Vector& x, const Vector& y, const Tolerances& tol);

} // namespace phiconv

#endif // PHICONV_CORE_HPP

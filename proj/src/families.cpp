#include "phiconv/families.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <string>

namespace phiconv {

namespace {

constexpr double kRankTol = 1e-9;
constexpr double kSeparationTol = 1e-9;
constexpr double kHarmonicResidual = 1e-10;
constexpr double kAlphaSlack = 1e-9;
// Largest grid solved by dense Cholesky; bigger grids fall back to Gauss-Seidel.
constexpr int kDirectSolveLimit = 64;

void check_rank(const Matrix& basis) {
    const Eigen::Index m = basis.rows();
    if (m == 0) {
        throw PhiError(ErrorKind::RankDeficientBasis, "empty basis");
    }
    Eigen::JacobiSVD<Matrix> svd(basis);
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    const double smallest = sv(sv.size() - 1);
    if (m > basis.cols() || smallest <= kRankTol * std::max(1.0, largest)) {
        throw PhiError(ErrorKind::RankDeficientBasis,
                       "basis rows are linearly dependent on this cloud");
    }
}

// Alpha is certified analytically per kind; this spot-check guards against
// implementation bugs in the basis assembly.
void spot_check_alpha(const FunctionFamily& family) {
    const int m = family.dimension();
    std::mt19937_64 rng(0x5eedf00dULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 64 + m; ++trial) {
        Vector c(m);
        if (trial < m) {
            c.setZero();
            c(trial) = 1.0;
        } else {
            for (int j = 0; j < m; ++j) c(j) = unit(rng);
        }
        const ScalarField phi = evaluate(family, c);
        const double sup = phi.values().cwiseAbs().maxCoeff();
        if (sup > family.alpha_bound() * family_norm(family, c) + kAlphaSlack) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "alpha bound certificate failed for this basis");
        }
    }
}

} // namespace

void GridSpec::validate() const {
    if (width < 3 || height < 3) {
        throw PhiError(ErrorKind::InvalidArgument, "grid width and height must be >= 3");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw PhiError(ErrorKind::InvalidArgument, "grid spacing must be positive");
    }
}

bool GridSpec::is_boundary(int index) const {
    const int col = index % width;
    const int row = index / width;
    return col == 0 || col == width - 1 || row == 0 || row == height - 1;
}

std::vector<int> GridSpec::boundary_indices() const {
    std::vector<int> out;
    for (int i = 0; i < node_count(); ++i) {
        if (is_boundary(i)) out.push_back(i);
    }
    return out;
}

std::vector<int> GridSpec::interior_indices() const {
    std::vector<int> out;
    for (int i = 0; i < node_count(); ++i) {
        if (!is_boundary(i)) out.push_back(i);
    }
    return out;
}

PointCloud GridSpec::make_cloud() const {
    validate();
    Matrix pts(node_count(), 2);
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            const int i = row * width + col;
            pts(i, 0) = col * spacing;
            pts(i, 1) = row * spacing;
        }
    }
    return PointCloud::euclidean(std::move(pts));
}

bool GridSpec::matches_cloud(const PointCloud& cloud) const {
    if (cloud.size() != node_count() || cloud.dim() != 2) return false;
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            const int i = row * width + col;
            if (std::abs(cloud.points()(i, 0) - col * spacing) > 1e-12 ||
                std::abs(cloud.points()(i, 1) - row * spacing) > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

FunctionFamily FunctionFamily::from_basis(FamilyKind kind, Matrix basis, NormKind norm,
                                          double alpha_bound, int basepoint,
                                          std::optional<Matrix> distances) {
    if (basis.rows() < 1 || basis.cols() < 2) {
        throw PhiError(ErrorKind::InvalidArgument, "basis must be m x N with N >= 2");
    }
    if (!basis.allFinite()) {
        throw PhiError(ErrorKind::InvalidArgument, "basis entries must be finite");
    }
    if (norm == NormKind::Lip && !distances) {
        throw PhiError(ErrorKind::InvalidArgument, "Lip-norm family needs a distance matrix");
    }
    check_rank(basis);
    FunctionFamily fam(kind, std::move(basis), norm, alpha_bound, basepoint,
                       std::move(distances));
    spot_check_alpha(fam);
    return fam;
}

FunctionFamily build_affine(const PointCloud& cloud) {
    const int n = cloud.dim();
    const int N = cloud.size();
    Matrix basis(n + 1, N);
    basis.row(0).setOnes();
    basis.bottomRows(n) = cloud.points().transpose();
    return FunctionFamily::from_basis(FamilyKind::Affine, std::move(basis), NormKind::Sup,
                                      1.0);
}

namespace {

void enumerate_exponents(int pos, int remaining, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
    if (pos == static_cast<int>(current.size())) {
        out.push_back(current);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[static_cast<size_t>(pos)] = e;
        enumerate_exponents(pos + 1, remaining - e, current, out);
    }
}

} // namespace

FunctionFamily build_polynomial(const PointCloud& cloud, int degree) {
    if (degree < 1) {
        throw PhiError(ErrorKind::InvalidArgument, "polynomial degree must be >= 1");
    }
    const int n = cloud.dim();
    const int N = cloud.size();

    // Shift-scale every coordinate into [-1, 1]; constant coordinates map to 0.
    Matrix scaled(N, n);
    for (int k = 0; k < n; ++k) {
        const double lo = cloud.points().col(k).minCoeff();
        const double hi = cloud.points().col(k).maxCoeff();
        if (hi - lo <= 1e-300) {
            scaled.col(k).setZero();
        } else {
            scaled.col(k) = (2.0 * cloud.points().col(k).array() - (lo + hi)) / (hi - lo);
        }
    }

    std::vector<std::vector<int>> exps;
    std::vector<int> current(static_cast<size_t>(n), 0);
    for (int total = 0; total <= degree; ++total) {
        std::vector<std::vector<int>> layer;
        enumerate_exponents(0, total, current, layer);
        for (auto& e : layer) {
            int sum = 0;
            for (int v : e) sum += v;
            if (sum == total) exps.push_back(std::move(e));
        }
    }

    Matrix basis(static_cast<Eigen::Index>(exps.size()), N);
    for (size_t j = 0; j < exps.size(); ++j) {
        for (int i = 0; i < N; ++i) {
            double v = 1.0;
            for (int k = 0; k < n; ++k) {
                v *= std::pow(scaled(i, k), exps[j][static_cast<size_t>(k)]);
            }
            basis(static_cast<Eigen::Index>(j), i) = v;
        }
    }
    return FunctionFamily::from_basis(FamilyKind::Polynomial, std::move(basis),
                                      NormKind::Sup, 1.0);
}

FunctionFamily build_lipschitz(const PointCloud& cloud, int basepoint, bool full_space) {
    const int N = cloud.size();
    if (basepoint < 0 || basepoint >= N) {
        throw PhiError(ErrorKind::InvalidArgument, "lipschitz basepoint out of range");
    }
    Matrix basis(N - 1, N);
    int r = 0;
    for (int i = 0; i < N; ++i) {
        if (i == basepoint) continue;
        for (int j = 0; j < N; ++j) {
            if (full_space) {
                basis(r, j) = (i == j) ? 1.0 : 0.0;
            } else {
                // d(., p_i) shifted to vanish at the basepoint; 1-Lipschitz.
                basis(r, j) = cloud.distance(j, i) - cloud.distance(basepoint, i);
            }
        }
        ++r;
    }
    return FunctionFamily::from_basis(FamilyKind::Lipschitz, std::move(basis), NormKind::Lip,
                                      cloud.diameter(), basepoint, cloud.distance_matrix());
}

namespace {

// Dirichlet solve of the 5-point Laplacian for every boundary-indicator datum
// at once. Returns the interior values, one column per boundary node.
Matrix harmonic_interior_values(const GridSpec& grid) {
    const auto interior = grid.interior_indices();
    const auto boundary = grid.boundary_indices();
    const int ni = static_cast<int>(interior.size());
    const int nb = static_cast<int>(boundary.size());

    std::vector<int> interior_pos(static_cast<size_t>(grid.node_count()), -1);
    for (int k = 0; k < ni; ++k) interior_pos[static_cast<size_t>(interior[static_cast<size_t>(k)])] = k;
    std::vector<int> boundary_pos(static_cast<size_t>(grid.node_count()), -1);
    for (int k = 0; k < nb; ++k) boundary_pos[static_cast<size_t>(boundary[static_cast<size_t>(k)])] = k;

    const int W = grid.width;
    auto neighbors = [&](int node) {
        std::vector<int> out;
        const int col = node % W;
        const int row = node / W;
        if (col > 0) out.push_back(node - 1);
        if (col < W - 1) out.push_back(node + 1);
        if (row > 0) out.push_back(node - W);
        if (row < grid.height - 1) out.push_back(node + W);
        return out;
    };

    Matrix A = Matrix::Zero(ni, ni);
    Matrix rhs = Matrix::Zero(ni, nb);
    for (int k = 0; k < ni; ++k) {
        const int node = interior[static_cast<size_t>(k)];
        A(k, k) = 4.0;
        for (int nb_node : neighbors(node)) {
            const int ip = interior_pos[static_cast<size_t>(nb_node)];
            if (ip >= 0) {
                A(k, ip) = -1.0;
            } else {
                rhs(k, boundary_pos[static_cast<size_t>(nb_node)]) += 1.0;
            }
        }
    }

    Matrix X;
    if (grid.width <= kDirectSolveLimit && grid.height <= kDirectSolveLimit) {
        X = A.llt().solve(rhs);
    } else {
        // Gauss-Seidel sweeps; the interior Laplacian is diagonally dominant.
        X = Matrix::Zero(ni, nb);
        const int max_sweeps = 400000;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            for (int k = 0; k < ni; ++k) {
                Eigen::RowVectorXd acc = rhs.row(k);
                const int node = interior[static_cast<size_t>(k)];
                for (int nb_node : neighbors(node)) {
                    const int ip = interior_pos[static_cast<size_t>(nb_node)];
                    if (ip >= 0) acc += X.row(ip);
                }
                X.row(k) = acc / 4.0;
            }
            if (sweep % 16 == 15 &&
                (A * X - rhs).cwiseAbs().maxCoeff() <= kHarmonicResidual) {
                break;
            }
        }
    }

    const double residual = (A * X - rhs).cwiseAbs().maxCoeff();
    if (residual > kHarmonicResidual) {
        throw PhiError(ErrorKind::SolverNoConvergence,
                       "harmonic solve residual " + std::to_string(residual));
    }
    return X;
}

} // namespace

FunctionFamily build_harmonic(const PointCloud& cloud, const GridSpec& grid) {
    grid.validate();
    if (!grid.matches_cloud(cloud)) {
        throw PhiError(ErrorKind::GridMismatch, "cloud is not the grid node set");
    }
    const auto interior = grid.interior_indices();
    const auto boundary = grid.boundary_indices();
    const Matrix X = harmonic_interior_values(grid);

    Matrix basis = Matrix::Zero(static_cast<Eigen::Index>(boundary.size()), cloud.size());
    for (size_t b = 0; b < boundary.size(); ++b) {
        basis(static_cast<Eigen::Index>(b), boundary[b]) = 1.0;
        for (size_t k = 0; k < interior.size(); ++k) {
            basis(static_cast<Eigen::Index>(b), interior[k]) =
                X(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
        }
    }
    return FunctionFamily::from_basis(FamilyKind::Harmonic, std::move(basis), NormKind::Sup,
                                      1.0);
}

FunctionFamily build_family(const FamilySpec& spec, const PointCloud& cloud) {
    switch (spec.kind) {
    case FamilyKind::Affine:
        return build_affine(cloud);
    case FamilyKind::Polynomial:
        return build_polynomial(cloud, spec.degree);
    case FamilyKind::Lipschitz:
        return build_lipschitz(cloud, spec.basepoint, spec.lip_full);
    case FamilyKind::Harmonic:
        if (!spec.grid) {
            throw PhiError(ErrorKind::InvalidArgument, "harmonic family needs a grid spec");
        }
        return build_harmonic(cloud, *spec.grid);
    case FamilyKind::Custom:
        break;
    }
    throw PhiError(ErrorKind::InvalidArgument, "custom families are built from_basis");
}

ScalarField evaluate(const FunctionFamily& family, const Vector& coefficients) {
    if (coefficients.size() != family.dimension()) {
        throw PhiError(ErrorKind::SizeMismatch, "coefficient length != family dimension");
    }
    return ScalarField(family.basis().transpose() * coefficients);
}

double family_norm(const FunctionFamily& family, const Vector& coefficients) {
    if (coefficients.size() != family.dimension()) {
        throw PhiError(ErrorKind::SizeMismatch, "coefficient length != family dimension");
    }
    const Vector values = family.basis().transpose() * coefficients;
    if (family.norm_kind() == NormKind::Sup) {
        return values.cwiseAbs().maxCoeff();
    }
    const Matrix& d = *family.distances_;
    double worst = 0.0;
    for (int i = 0; i < values.size(); ++i) {
        for (int j = i + 1; j < values.size(); ++j) {
            worst = std::max(worst, std::abs(values(i) - values(j)) / d(i, j));
        }
    }
    return worst;
}

SeparationResult separates_points(const FunctionFamily& family, const IndexSet& domain) {
    for (int a = 0; a < domain.size(); ++a) {
        for (int b = a + 1; b < domain.size(); ++b) {
            const int i = domain[a];
            const int j = domain[b];
            const double diff =
                (family.basis().col(i) - family.basis().col(j)).cwiseAbs().maxCoeff();
            if (diff <= kSeparationTol) {
                return {false, std::make_pair(i, j)};
            }
        }
    }
    return {true, std::nullopt};
}

} // namespace phiconv

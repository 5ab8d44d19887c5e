#ifndef PHICONV_FAMILIES_HPP
#define PHICONV_FAMILIES_HPP

#include <optional>
#include <utility>
#include <vector>

#include "phiconv/core.hpp"

namespace phiconv {

enum class FamilyKind { Affine, Polynomial, Lipschitz, Harmonic, Custom };
enum class NormKind { Sup, Lip };

/// Rectangular grid for the discrete harmonic family. Node (col, row) sits at
/// (col*spacing, row*spacing) and has cloud index row*width + col.
struct GridSpec {
    int width = 0;
    int height = 0;
    double spacing = 1.0;

    void validate() const;
    int node_count() const { return width * height; }
    bool is_boundary(int index) const;
    std::vector<int> boundary_indices() const;
    std::vector<int> interior_indices() const;
    PointCloud make_cloud() const;
    /// True when the cloud's points are exactly the grid nodes, in node order.
    bool matches_cloud(const PointCloud& cloud) const;

    bool operator==(const GridSpec&) const = default;
};

/// A finite-dimensional linear space of functions on a cloud, given by a
/// basis evaluation matrix (row j = basis function j at all cloud points).
/// Immutable after construction.
class FunctionFamily {
public:
    /// Direct construction from a basis matrix. Checks row independence and
    /// spot-checks the alpha bound. `distances` is required for NormKind::Lip.
    static FunctionFamily from_basis(FamilyKind kind, Matrix basis, NormKind norm,
                                     double alpha_bound, int basepoint = -1,
                                     std::optional<Matrix> distances = std::nullopt);

    FamilyKind kind() const { return kind_; }
    NormKind norm_kind() const { return norm_; }
    int dimension() const { return static_cast<int>(basis_.rows()); }
    int cloud_size() const { return static_cast<int>(basis_.cols()); }
    int basepoint() const { return basepoint_; }
    double alpha_bound() const { return alpha_bound_; }
    const Matrix& basis() const { return basis_; }

    /// Feature vector of cloud point i: (g_1(i), ..., g_m(i)).
    Vector feature(int i) const { return basis_.col(i); }

private:
    FunctionFamily(FamilyKind kind, Matrix basis, NormKind norm, double alpha_bound,
                   int basepoint, std::optional<Matrix> distances)
        : kind_(kind), basis_(std::move(basis)), norm_(norm), alpha_bound_(alpha_bound),
          basepoint_(basepoint), distances_(std::move(distances)) {}

    friend double family_norm(const FunctionFamily&, const Vector&);

    FamilyKind kind_;
    Matrix basis_; // m x N
    NormKind norm_;
    double alpha_bound_;
    int basepoint_;
    std::optional<Matrix> distances_; // N x N, present for Lip-norm families
};

/// Basis {1, x_1, ..., x_n}; sup norm, alpha = 1.
FunctionFamily build_affine(const PointCloud& cloud);

/// All monomials of total degree <= d in coordinates shift-scaled into
/// [-1,1]^n; sup norm, alpha = 1.
FunctionFamily build_polynomial(const PointCloud& cloud, int degree);

/// Functions vanishing at the basepoint, with the Lipschitz norm taken over
/// the cloud metric; alpha = cloud diameter. The default basis is the shifted
/// distance functions x -> d(x, p_i) - d(x0, p_i) for i != basepoint;
/// `full_space` switches to the full (N-1)-dimensional space spanned by the
/// off-basepoint indicator functions.
FunctionFamily build_lipschitz(const PointCloud& cloud, int basepoint, bool full_space = false);

/// Discrete harmonic measures of the 5-point Laplacian: one basis function
/// per boundary node (boundary data 1 there, 0 elsewhere, harmonic inside);
/// sup norm, alpha = 1. The cloud must be exactly the grid nodes.
FunctionFamily build_harmonic(const PointCloud& cloud, const GridSpec& grid);

/// Scenario-level family description; `build_family` dispatches on it.
struct FamilySpec {
    FamilyKind kind = FamilyKind::Affine;
    int degree = 1;        // polynomial
    int basepoint = 0;     // lipschitz
    bool lip_full = false; // lipschitz
    std::optional<GridSpec> grid; // harmonic

    bool operator==(const FamilySpec&) const = default;
};

FunctionFamily build_family(const FamilySpec& spec, const PointCloud& cloud);

/// phi = sum_j c_j g_j as a field on the cloud.
ScalarField evaluate(const FunctionFamily& family, const Vector& coefficients);

/// Sup norm or Lipschitz norm of the represented function, per the family.
double family_norm(const FunctionFamily& family, const Vector& coefficients);

struct SeparationResult {
    bool separates = true;
    std::optional<std::pair<int, int>> violating_pair;
};

/// True iff the basis feature map is injective on the domain: every pair of
/// distinct domain indices is distinguished by some basis row by more than 1e-9.
SeparationResult separates_points(const FunctionFamily& family, const IndexSet& domain);

} // namespace phiconv

#endif // PHICONV_FAMILIES_HPP

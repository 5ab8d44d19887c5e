#ifndef PHICONV_LINPROG_HPP
#define PHICONV_LINPROG_HPP

#include <optional>
#include <vector>

#include "phiconv/core.hpp"

namespace phiconv {

enum class Relation { LessEq, GreaterEq, Equal };
enum class Sense { Minimize, Maximize };

struct LinearConstraint {
    Vector row;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

/// Optional per-variable bounds; a default-constructed value means free.
struct VariableBounds {
    std::optional<double> lower;
    std::optional<double> upper;
};

struct LPProblem {
    Vector objective;                        ///< length m
    Sense sense = Sense::Maximize;
    std::vector<LinearConstraint> constraints;
    std::vector<VariableBounds> bounds;      ///< empty, or one entry per variable
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    Vector x;                       ///< valid when status == Optimal
    double objective_value = 0.0;   ///< valid when status == Optimal
    double max_primal_residual = 0.0;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule. Rows are
/// scaled to unit max-norm before solving. Throws PhiError on malformed input
/// and ErrorKind::IterationLimit when the pivot cap 50*(m + #constraints) is
/// exceeded; a cap hit is never reported as a status.
LPSolution solve(const LPProblem& problem, const Tolerances& tol);

struct FeasibilityResult {
    bool feasible = false;
    std::optional<Vector> witness; ///< satisfies all constraints within tol.lp_feas
};

/// Phase-one wrapper: decides whether the constraint system has a solution.
FeasibilityResult feasible(const std::vector<LinearConstraint>& constraints,
                           const Tolerances& tol);

/// Worst violation of x against the constraints (and bounds, when given).
double max_residual(const LPProblem& problem, const Vector& x);

} // namespace phiconv

#endif // PHICONV_LINPROG_HPP

#include "phiconv/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace phiconv {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;

struct Row {
    Vector coeffs;
    Relation rel;
    double rhs;
};

void validate_problem(const LPProblem& p) {
    const int m = static_cast<int>(p.objective.size());
    if (m < 1) {
        throw PhiError(ErrorKind::InvalidArgument, "LP needs at least one variable");
    }
    if (!p.objective.allFinite()) {
        throw PhiError(ErrorKind::InvalidArgument, "objective has non-finite entries");
    }
    for (size_t k = 0; k < p.constraints.size(); ++k) {
        const auto& c = p.constraints[k];
        if (c.row.size() != m) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "constraint " + std::to_string(k) + " has ragged row length");
        }
        if (!c.row.allFinite() || !std::isfinite(c.rhs)) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "constraint " + std::to_string(k) + " has non-finite entries");
        }
    }
    if (!p.bounds.empty() && static_cast<int>(p.bounds.size()) != m) {
        throw PhiError(ErrorKind::SizeMismatch, "bounds list must match variable count");
    }
    for (const auto& b : p.bounds) {
        if ((b.lower && !std::isfinite(*b.lower)) || (b.upper && !std::isfinite(*b.upper))) {
            throw PhiError(ErrorKind::InvalidArgument, "bounds must be finite");
        }
    }
}

// Bounds become ordinary rows so the core solver only sees free variables.
std::vector<Row> collect_rows(const LPProblem& p) {
    const int m = static_cast<int>(p.objective.size());
    std::vector<Row> rows;
    rows.reserve(p.constraints.size() + 2 * p.bounds.size());
    for (const auto& c : p.constraints) {
        rows.push_back({c.row, c.rel, c.rhs});
    }
    for (int j = 0; j < static_cast<int>(p.bounds.size()); ++j) {
        Vector e = Vector::Zero(m);
        e(j) = 1.0;
        if (p.bounds[j].lower) rows.push_back({e, Relation::GreaterEq, *p.bounds[j].lower});
        if (p.bounds[j].upper) rows.push_back({e, Relation::LessEq, *p.bounds[j].upper});
    }
    return rows;
}

class SimplexTableau {
public:
    SimplexTableau(std::vector<Row> rows, const Vector& cost_min, int iteration_cap,
                   double feas_eps)
        : feas_eps_(feas_eps), iteration_cap_(iteration_cap) {
        m_ = static_cast<int>(cost_min.size());

        // Normalize rows to unit max-norm; all-zero rows are resolved here.
        std::vector<Row> kept;
        for (auto& r : rows) {
            const double scale = r.coeffs.lpNorm<Eigen::Infinity>();
            if (scale <= 0.0) {
                const bool ok = (r.rel == Relation::LessEq && r.rhs >= -feas_eps_) ||
                                (r.rel == Relation::GreaterEq && r.rhs <= feas_eps_) ||
                                (r.rel == Relation::Equal && std::abs(r.rhs) <= feas_eps_);
                if (!ok) trivially_infeasible_ = true;
                continue;
            }
            r.coeffs /= scale;
            r.rhs /= scale;
            kept.push_back(std::move(r));
        }
        rows = std::move(kept);
        ncons_ = static_cast<int>(rows.size());

        // Columns: m split pairs (u_j, v_j), one slack/surplus per inequality,
        // one artificial per row that lacks a natural basic column.
        int nslack = 0;
        for (const auto& r : rows) {
            if (r.rel != Relation::Equal) ++nslack;
        }
        const int split = 2 * m_;
        ntot_ = split + nslack + ncons_; // artificials allocated per row, some unused
        art_begin_ = split + nslack;

        T_.assign(static_cast<size_t>(ncons_ + 2), std::vector<double>(ntot_ + 1, 0.0));
        basis_.assign(static_cast<size_t>(ncons_), -1);
        removed_.assign(static_cast<size_t>(ncons_), false);

        int slack = split;
        for (int i = 0; i < ncons_; ++i) {
            const Row& r = rows[static_cast<size_t>(i)];
            double sign = 1.0;
            Relation rel = r.rel;
            double rhs = r.rhs;
            if (rhs < 0.0) { // make rhs nonnegative
                sign = -1.0;
                rhs = -rhs;
                if (rel == Relation::LessEq) rel = Relation::GreaterEq;
                else if (rel == Relation::GreaterEq) rel = Relation::LessEq;
            }
            auto& row = T_[static_cast<size_t>(i)];
            for (int j = 0; j < m_; ++j) {
                row[static_cast<size_t>(j)] = sign * r.coeffs(j);
                row[static_cast<size_t>(m_ + j)] = -sign * r.coeffs(j);
            }
            row[static_cast<size_t>(ntot_)] = rhs;
            if (rel == Relation::LessEq) {
                row[static_cast<size_t>(slack)] = 1.0;
                basis_[static_cast<size_t>(i)] = slack++;
            } else {
                if (rel == Relation::GreaterEq) {
                    row[static_cast<size_t>(slack)] = -1.0;
                    ++slack;
                }
                const int art = art_begin_ + i;
                row[static_cast<size_t>(art)] = 1.0;
                basis_[static_cast<size_t>(i)] = art;
            }
        }

        // Phase-2 reduced costs: split objective, basis costs are all zero.
        auto& obj = T_[static_cast<size_t>(ncons_)];
        for (int j = 0; j < m_; ++j) {
            obj[static_cast<size_t>(j)] = cost_min(j);
            obj[static_cast<size_t>(m_ + j)] = -cost_min(j);
        }

        // Phase-1 reduced costs: unit cost on artificials, minus the rows in
        // which an artificial starts basic.
        auto& p1 = T_[static_cast<size_t>(ncons_ + 1)];
        for (int i = 0; i < ncons_; ++i) {
            if (basis_[static_cast<size_t>(i)] >= art_begin_) {
                for (int j = 0; j <= ntot_; ++j) {
                    p1[static_cast<size_t>(j)] -= T_[static_cast<size_t>(i)][static_cast<size_t>(j)];
                }
            }
        }
        for (int i = 0; i < ncons_; ++i) {
            const int art = art_begin_ + i;
            if (basis_[static_cast<size_t>(i)] == art) p1[static_cast<size_t>(art)] += 1.0;
        }
    }

    bool trivially_infeasible() const { return trivially_infeasible_; }

    // Runs phase 1 and phase 2; returns the status. x receives the original
    // (un-split) variables when optimal.
    LPStatus run(Vector& x) {
        if (trivially_infeasible_) return LPStatus::Infeasible;

        iterate(/*phase1=*/true); // cannot report a ray: the objective is >= 0
        const double art_sum = -T_[static_cast<size_t>(ncons_ + 1)][static_cast<size_t>(ntot_)];
        if (art_sum > feas_eps_) return LPStatus::Infeasible;
        purge_artificials();

        if (!iterate(/*phase1=*/false)) return LPStatus::Unbounded;

        x = Vector::Zero(m_);
        for (int i = 0; i < ncons_; ++i) {
            if (removed_[static_cast<size_t>(i)]) continue;
            const int b = basis_[static_cast<size_t>(i)];
            const double val = T_[static_cast<size_t>(i)][static_cast<size_t>(ntot_)];
            if (b < m_) x(b) += val;
            else if (b < 2 * m_) x(b - m_) -= val;
        }
        return LPStatus::Optimal;
    }

private:
    void pivot(int prow, int pcol) {
        auto& pr = T_[static_cast<size_t>(prow)];
        const double inv = 1.0 / pr[static_cast<size_t>(pcol)];
        for (int j = 0; j <= ntot_; ++j) pr[static_cast<size_t>(j)] *= inv;
        pr[static_cast<size_t>(pcol)] = 1.0;
        for (int i = 0; i < ncons_ + 2; ++i) {
            if (i == prow || (i < ncons_ && removed_[static_cast<size_t>(i)])) continue;
            auto& ri = T_[static_cast<size_t>(i)];
            const double factor = ri[static_cast<size_t>(pcol)];
            if (factor == 0.0) continue;
            for (int j = 0; j <= ntot_; ++j) {
                ri[static_cast<size_t>(j)] -= factor * pr[static_cast<size_t>(j)];
            }
            ri[static_cast<size_t>(pcol)] = 0.0;
        }
        basis_[static_cast<size_t>(prow)] = pcol;
    }

    int ratio_test(int entering) const {
        int leaving = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < ncons_; ++i) {
            if (removed_[static_cast<size_t>(i)]) continue;
            const double a = T_[static_cast<size_t>(i)][static_cast<size_t>(entering)];
            if (a <= kPivotEps) continue;
            const double ratio = T_[static_cast<size_t>(i)][static_cast<size_t>(ntot_)] / a;
            if (ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 && leaving >= 0 &&
                 basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leaving)])) {
                best_ratio = ratio;
                leaving = i;
            }
        }
        return leaving;
    }

    // Entering rule: steepest reduced cost (Dantzig) at first, switching to
    // Bland's lowest-index rule once the pivot count passes a stall threshold;
    // Bland's rule guarantees no cycling, Dantzig keeps typical runs short.
    // Leaving rule: min ratio, ties broken by lowest basic index.
    // Returns false when some entering column is genuinely unbounded below.
    bool iterate(bool phase1) {
        const int cost_row = phase1 ? ncons_ + 1 : ncons_;
        const int bland_after = 4 * (ncons_ + art_begin_);
        for (;;) {
            const auto& costs = T_[static_cast<size_t>(cost_row)];
            const bool bland = iterations_ >= bland_after;
            bool pivoted = false;
            bool candidates_left = true;
            std::vector<bool> skipped(static_cast<size_t>(art_begin_), false);
            while (candidates_left && !pivoted) {
                int entering = -1;
                double steepest = -kCostEps;
                // Artificial columns never re-enter, in either phase.
                for (int j = 0; j < art_begin_; ++j) {
                    if (skipped[static_cast<size_t>(j)]) continue;
                    const double c = costs[static_cast<size_t>(j)];
                    if (c >= -kCostEps) continue;
                    if (bland) {
                        entering = j;
                        break;
                    }
                    if (c < steepest) {
                        steepest = c;
                        entering = j;
                    }
                }
                if (entering < 0) {
                    candidates_left = false;
                    break;
                }
                const int leaving = ratio_test(entering);
                if (leaving < 0) {
                    // The phase-1 objective is bounded below by zero, so a
                    // missing ratio row there is roundoff in the cost row, not
                    // a real ray.
                    if (phase1 || costs[static_cast<size_t>(entering)] > -1e-7) {
                        skipped[static_cast<size_t>(entering)] = true;
                        continue;
                    }
                    return false;
                }
                if (++iterations_ > iteration_cap_) {
                    throw PhiError(ErrorKind::IterationLimit,
                                   "simplex exceeded " + std::to_string(iteration_cap_) +
                                       " pivots");
                }
                pivot(leaving, entering);
                pivoted = true;
            }
            if (!pivoted) return true;
        }
    }

    // After phase 1, pivot leftover artificials out of the basis or drop the
    // redundant rows they certify. The largest-magnitude eligible entry keeps
    // the basis-completion pivots well conditioned.
    void purge_artificials() {
        for (int i = 0; i < ncons_; ++i) {
            if (removed_[static_cast<size_t>(i)]) continue;
            if (basis_[static_cast<size_t>(i)] < art_begin_) continue;
            int col = -1;
            double best = 1e-8;
            for (int j = 0; j < art_begin_; ++j) {
                const double a = std::abs(T_[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                if (a > best) {
                    best = a;
                    col = j;
                }
            }
            if (col >= 0) pivot(i, col);
            else removed_[static_cast<size_t>(i)] = true;
        }
    }

    std::vector<std::vector<double>> T_;
    std::vector<int> basis_;
    std::vector<bool> removed_;
    int m_ = 0;
    int ncons_ = 0;
    int ntot_ = 0;
    int art_begin_ = 0;
    int iterations_ = 0;
    double feas_eps_;
    int iteration_cap_;
    bool trivially_infeasible_ = false;
};

} // namespace

double max_residual(const LPProblem& problem, const Vector& x) {
    double worst = 0.0;
    for (const auto& c : problem.constraints) {
        const double lhs = c.row.dot(x);
        double viol = 0.0;
        switch (c.rel) {
        case Relation::LessEq:    viol = lhs - c.rhs; break;
        case Relation::GreaterEq: viol = c.rhs - lhs; break;
        case Relation::Equal:     viol = std::abs(lhs - c.rhs); break;
        }
        worst = std::max(worst, viol);
    }
    for (int j = 0; j < static_cast<int>(problem.bounds.size()); ++j) {
        if (problem.bounds[j].lower) worst = std::max(worst, *problem.bounds[j].lower - x(j));
        if (problem.bounds[j].upper) worst = std::max(worst, x(j) - *problem.bounds[j].upper);
    }
    return worst;
}

LPSolution solve(const LPProblem& problem, const Tolerances& tol) {
    tol.validate();
    validate_problem(problem);

    const int m = static_cast<int>(problem.objective.size());
    Vector cost_min = problem.objective;
    if (problem.sense == Sense::Maximize) cost_min = -cost_min;
    // Objective normalization keeps the cost-row epsilon meaningful; the
    // optimum is rescaled on the way out.
    const double obj_scale = cost_min.lpNorm<Eigen::Infinity>();
    if (obj_scale > 0.0) cost_min /= obj_scale;

    const auto rows = collect_rows(problem);
    const int cap = 50 * (m + static_cast<int>(rows.size()));
    SimplexTableau tableau(rows, cost_min, cap, tol.lp_feas);

    LPSolution sol;
    Vector x;
    const LPStatus status = tableau.run(x);
    sol.status = status;
    if (status == LPStatus::Optimal) {
        sol.x = x;
        sol.objective_value = problem.objective.dot(x);
        sol.max_primal_residual = max_residual(problem, x);
    }
    return sol;
}

FeasibilityResult feasible(const std::vector<LinearConstraint>& constraints,
                           const Tolerances& tol) {
    if (constraints.empty()) {
        return {true, Vector::Zero(1)};
    }
    LPProblem p;
    p.objective = Vector::Zero(constraints.front().row.size());
    p.sense = Sense::Minimize;
    p.constraints = constraints;
    const LPSolution sol = solve(p, tol);
    if (sol.status == LPStatus::Optimal) {
        return {true, sol.x};
    }
    return {false, std::nullopt};
}

} // namespace phiconv

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "phiconv/linprog.hpp"

using namespace phiconv;
using namespace phiconv::testing;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

const Tolerances kTol;

} // namespace

TEST_CASE("one-variable maximize with box constraints") {
    LPProblem p;
    p.objective = vec({1});
    p.sense = Sense::Maximize;
    p.constraints = {{vec({1}), Relation::LessEq, 3.0}, {vec({1}), Relation::GreaterEq, 0.0}};
    const LPSolution s = solve(p, kTol);
    REQUIRE(s.status == LPStatus::Optimal);
    CHECK(s.x(0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(s.objective_value == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(s.max_primal_residual <= kTol.lp_feas);
}

TEST_CASE("bounds field behaves like constraint rows") {
    LPProblem p;
    p.objective = vec({1});
    p.sense = Sense::Maximize;
    p.bounds = {{0.0, 3.0}};
    const LPSolution s = solve(p, kTol);
    REQUIRE(s.status == LPStatus::Optimal);
    CHECK(s.x(0) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("infeasible and unbounded detection") {
    LPProblem p;
    p.objective = vec({1});
    p.constraints = {{vec({1}), Relation::GreaterEq, 1.0}, {vec({1}), Relation::LessEq, 0.0}};
    CHECK(solve(p, kTol).status == LPStatus::Infeasible);

    LPProblem q;
    q.objective = vec({1});
    q.sense = Sense::Maximize;
    q.constraints = {{vec({1}), Relation::GreaterEq, 0.0}};
    CHECK(solve(q, kTol).status == LPStatus::Unbounded);
}

TEST_CASE("equality constraints and minimize sense") {
    LPProblem p;
    p.objective = vec({1, 1});
    p.sense = Sense::Minimize;
    p.constraints = {{vec({1, 1}), Relation::Equal, 2.0},
                     {vec({1, -1}), Relation::LessEq, 0.5},
                     {vec({1, 0}), Relation::GreaterEq, 0.0}};
    const LPSolution s = solve(p, kTol);
    REQUIRE(s.status == LPStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(s.max_primal_residual <= kTol.lp_feas);
}

TEST_CASE("feasible: simple witnesses") {
    {
        std::vector<LinearConstraint> sys = {{vec({1}), Relation::GreaterEq, 1.0},
                                             {vec({1}), Relation::LessEq, 2.0}};
        const FeasibilityResult r = feasible(sys, kTol);
        REQUIRE(r.feasible);
        CHECK((*r.witness)(0) >= 1.0 - kTol.lp_feas);
        CHECK((*r.witness)(0) <= 2.0 + kTol.lp_feas);
    }
    {
        std::vector<LinearConstraint> sys = {{vec({1}), Relation::GreaterEq, 1.0},
                                             {vec({-1}), Relation::GreaterEq, 0.0}};
        CHECK_FALSE(feasible(sys, kTol).feasible);
    }
}

TEST_CASE("feasible: margin system from the betweenness reduction") {
    // u = (1,0), v = (0,1): c = (1,1) satisfies all three rows by hand.
    const Vector u = vec({1, 0});
    const Vector v = vec({0, 1});
    std::vector<LinearConstraint> sys = {{u, Relation::GreaterEq, 0.0},
                                         {v, Relation::GreaterEq, 0.0},
                                         {u + v, Relation::GreaterEq, 1.0}};
    const FeasibilityResult r = feasible(sys, kTol);
    REQUIRE(r.feasible);
    const Vector& c = *r.witness;
    CHECK(u.dot(c) >= -kTol.lp_feas);
    CHECK(v.dot(c) >= -kTol.lp_feas);
    CHECK((u + v).dot(c) >= 1.0 - kTol.lp_feas);
}

TEST_CASE("malformed problems are rejected") {
    LPProblem p;
    p.objective = vec({1, 2});
    p.constraints = {{vec({1}), Relation::LessEq, 1.0}}; // ragged
    CHECK_THROWS_AS(solve(p, kTol), PhiError);

    LPProblem q;
    q.objective = vec({std::nan("")});
    CHECK_THROWS_AS(solve(q, kTol), PhiError);

    LPProblem r;
    r.objective = Vector(0);
    CHECK_THROWS_AS(solve(r, kTol), PhiError);
}

namespace {

LPProblem random_bounded_lp(Rng& rng) {
    const int m = uniform_int(rng, 1, 4);
    LPProblem p;
    p.objective = Vector(m);
    for (int j = 0; j < m; ++j) p.objective(j) = uniform(rng, -1, 1);
    p.sense = rng() % 2 ? Sense::Maximize : Sense::Minimize;
    p.bounds.resize(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) p.bounds[static_cast<size_t>(j)] = {-2.0, 2.0};

    // A feasibility anchor keeps most instances nonempty.
    Vector anchor(m);
    for (int j = 0; j < m; ++j) anchor(j) = uniform(rng, -1.5, 1.5);
    const int rows = uniform_int(rng, 0, 6);
    for (int k = 0; k < rows; ++k) {
        Vector row(m);
        for (int j = 0; j < m; ++j) row(j) = uniform(rng, -1, 1);
        const double shift = uniform(rng, -0.2, 0.6);
        p.constraints.push_back({row, Relation::LessEq, row.dot(anchor) + shift});
    }
    return p;
}

} // namespace

TEST_CASE("simplex optimum matches the vertex-enumeration oracle") {
    Rng rng(2024);
    int optimal_count = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const LPProblem p = random_bounded_lp(rng);
        const LPSolution s = solve(p, kTol);
        const OracleLP oracle = enumerate_vertices(p);
        if (s.status == LPStatus::Optimal) {
            ++optimal_count;
            REQUIRE(oracle.found);
            CHECK(std::abs(s.objective_value - oracle.value) <= 1e-7);
            CHECK(s.max_primal_residual <= kTol.lp_feas);
        } else {
            // The box makes every instance bounded, so the only alternative is
            // infeasibility, where no candidate vertex may be feasible.
            CHECK(s.status == LPStatus::Infeasible);
            CHECK_FALSE(oracle.found);
        }
    }
    CHECK(optimal_count > 100); // the anchor keeps most instances feasible
}

TEST_CASE("feasible is monotone under constraint removal") {
    Rng rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = uniform_int(rng, 1, 3);
        std::vector<LinearConstraint> sys;
        const int rows = uniform_int(rng, 1, 5);
        for (int k = 0; k < rows; ++k) {
            Vector row(m);
            for (int j = 0; j < m; ++j) row(j) = uniform(rng, -1, 1);
            sys.push_back({row, rng() % 2 ? Relation::LessEq : Relation::GreaterEq,
                           uniform(rng, -1, 1)});
        }
        if (!feasible(sys, kTol).feasible) continue;
        for (size_t drop = 0; drop < sys.size(); ++drop) {
            std::vector<LinearConstraint> reduced;
            for (size_t k = 0; k < sys.size(); ++k) {
                if (k != drop) reduced.push_back(sys[k]);
            }
            CHECK(feasible(reduced, kTol).feasible);
        }
    }
}

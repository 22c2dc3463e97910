#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rumdp/lp.hpp"

#include <cmath>
#include <functional>
#include <vector>

using namespace rumdp;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
    VectorXd v(int(xs.size()));
    int i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

// Independent oracle: enumerate all candidate vertices (d-subsets of tight
// rows), keep the feasible ones, and take the best objective. Only valid for
// bounded feasible LPs whose optimum sits at a vertex of the row system, so
// variables must be free and the rows must bound the region.
double vertex_oracle(const LinearProgram& lp, bool* feasible) {
    const int d = lp.num_vars();
    const int m = int(lp.rows.size());
    double best = lp.sense == LpSense::maximize
                      ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
    *feasible = false;
    std::vector<int> pick(static_cast<std::size_t>(d));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == d) {
            MatrixXd a(d, d);
            VectorXd b(d);
            for (int i = 0; i < d; ++i) {
                a.row(i) = lp.rows[std::size_t(pick[std::size_t(i)])].coeffs;
                b(i) = lp.rows[std::size_t(pick[std::size_t(i)])].rhs;
            }
            Eigen::FullPivLU<MatrixXd> lu(a);
            if (!lu.isInvertible()) return;
            VectorXd x = lu.solve(b);
            for (const auto& row : lp.rows) {
                const double lhs = row.coeffs.dot(x);
                if (row.relation == LpRelation::less_equal && lhs > row.rhs + 1e-7) return;
                if (row.relation == LpRelation::greater_equal && lhs < row.rhs - 1e-7) return;
                if (row.relation == LpRelation::equal && std::abs(lhs - row.rhs) > 1e-7) return;
            }
            *feasible = true;
            const double obj = lp.objective.dot(x);
            if (lp.sense == LpSense::maximize) best = std::max(best, obj);
            else best = std::min(best, obj);
            return;
        }
        for (int i = start; i < m; ++i) {
            pick[std::size_t(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

} // namespace

TEST_CASE("single bound maximization") {
    LinearProgram lp(1);
    lp.sense = LpSense::maximize;
    lp.objective(0) = 1.0;
    lp.add_row(vec({1.0}), LpRelation::less_equal, 3.0);
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(out.solution(0) == doctest::Approx(3.0));
    CHECK(out.objective_value == doctest::Approx(3.0));
}

TEST_CASE("contradictory rows are infeasible") {
    LinearProgram lp(1);
    lp.objective(0) = 1.0;
    lp.add_row(vec({1.0}), LpRelation::less_equal, 0.0);
    lp.add_row(vec({-1.0}), LpRelation::less_equal, -1.0);
    CHECK(solve_lp(lp).status == LpStatus::infeasible);
}

TEST_CASE("unbounded direction detected") {
    LinearProgram lp(1);
    lp.sense = LpSense::maximize;
    lp.objective(0) = 1.0;
    lp.add_row(vec({-1.0}), LpRelation::less_equal, 0.0);
    CHECK(solve_lp(lp).status == LpStatus::unbounded);
}

TEST_CASE("equality rows and nonnegative variables") {
    // min x + 2y s.t. x + y = 1, x,y >= 0  ->  x = 1, y = 0
    LinearProgram lp(2);
    lp.objective = vec({1.0, 2.0});
    lp.lower = vec({0.0, 0.0});
    lp.add_row(vec({1.0, 1.0}), LpRelation::equal, 1.0);
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(out.objective_value == doctest::Approx(1.0));
    CHECK(out.solution(0) == doctest::Approx(1.0));
    CHECK(out.solution(1) == doctest::Approx(0.0));
}

TEST_CASE("free variables via greater-equal rows") {
    // min x s.t. x >= -5  ->  -5
    LinearProgram lp(1);
    lp.objective(0) = 1.0;
    lp.add_row(vec({1.0}), LpRelation::greater_equal, -5.0);
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(out.objective_value == doctest::Approx(-5.0));
}

TEST_CASE("variable bounds participate") {
    // max x + y with x in [1, 2], y in [-3, -1]
    LinearProgram lp(2);
    lp.sense = LpSense::maximize;
    lp.objective = vec({1.0, 1.0});
    lp.lower = vec({1.0, -3.0});
    lp.upper = vec({2.0, -1.0});
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(out.solution(0) == doctest::Approx(2.0));
    CHECK(out.solution(1) == doctest::Approx(-1.0));
}

TEST_CASE("degenerate homogeneous rows terminate") {
    // Many rows through the origin; exercises the Bland fallback.
    LinearProgram lp(2);
    lp.sense = LpSense::maximize;
    lp.objective = vec({1.0, 0.0});
    SplitMix64 rng(7);
    for (int i = 0; i < 40; ++i) {
        const double ang = rng.uniform(0.0, 3.141592653589793);
        lp.add_row(vec({std::cos(ang), std::sin(ang)}), LpRelation::less_equal, 0.0);
    }
    lp.add_row(vec({1.0, 0.0}), LpRelation::less_equal, 1.0);
    lp.add_row(vec({-1.0, 0.0}), LpRelation::less_equal, 1.0);
    lp.add_row(vec({0.0, 1.0}), LpRelation::less_equal, 1.0);
    lp.add_row(vec({0.0, -1.0}), LpRelation::less_equal, 1.0);
    auto out = solve_lp(lp);
    CHECK(out.status == LpStatus::optimal);
}

TEST_CASE("random bounded LPs match the vertex oracle") {
    SplitMix64 rng(42);
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + int(rng.uniform_int(3));
        LinearProgram lp(d);
        lp.sense = rng.uniform01() < 0.5 ? LpSense::maximize : LpSense::minimize;
        lp.objective = VectorXd::Zero(d);
        for (int j = 0; j < d; ++j) lp.objective(j) = rng.uniform(-1.0, 1.0);
        // A random box keeps the region bounded; extra random cuts.
        for (int j = 0; j < d; ++j) {
            VectorXd e = VectorXd::Zero(d);
            e(j) = 1.0;
            lp.add_row(e, LpRelation::less_equal, rng.uniform(0.5, 2.0));
            lp.add_row(-e, LpRelation::less_equal, rng.uniform(0.5, 2.0));
        }
        const int cuts = int(rng.uniform_int(4));
        for (int i = 0; i < cuts; ++i) {
            VectorXd row(d);
            for (int j = 0; j < d; ++j) row(j) = rng.uniform(-1.0, 1.0);
            lp.add_row(row, LpRelation::less_equal, rng.uniform(-0.5, 1.5));
        }
        bool feasible = false;
        const double oracle = vertex_oracle(lp, &feasible);
        auto out = solve_lp(lp);
        if (!feasible) {
            CHECK(out.status == LpStatus::infeasible);
            continue;
        }
        REQUIRE(out.status == LpStatus::optimal);
        CHECK(out.objective_value == doctest::Approx(oracle).epsilon(1e-7));
        ++solved;
    }
    CHECK(solved > 100);
}

TEST_CASE("reported solutions are feasible across a corpus") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + int(rng.uniform_int(4));
        LinearProgram lp(d);
        lp.sense = LpSense::maximize;
        lp.objective = VectorXd::Zero(d);
        for (int j = 0; j < d; ++j) lp.objective(j) = rng.uniform(-1.0, 1.0);
        for (int j = 0; j < d; ++j) {
            VectorXd e = VectorXd::Zero(d);
            e(j) = 1.0;
            lp.add_row(e, LpRelation::less_equal, 1.0);
            lp.add_row(-e, LpRelation::less_equal, 1.0);
        }
        VectorXd eq(d);
        for (int j = 0; j < d; ++j) eq(j) = rng.uniform(-1.0, 1.0);
        lp.add_row(eq, LpRelation::equal, 0.0);
        auto out = solve_lp(lp);
        REQUIRE(out.status == LpStatus::optimal);
        double worst = 0.0;
        for (const auto& row : lp.rows) {
            const double lhs = row.coeffs.dot(out.solution);
            if (row.relation == LpRelation::less_equal) worst = std::max(worst, lhs - row.rhs);
            else if (row.relation == LpRelation::equal)
                worst = std::max(worst, std::abs(lhs - row.rhs));
        }
        CHECK(worst <= 1e-7);
    }
}

TEST_CASE("determinism: identical inputs give identical outcomes") {
    LinearProgram lp(3);
    lp.sense = LpSense::maximize;
    lp.objective = vec({1.0, 1.0, 1.0});
    lp.lower = vec({0.0, 0.0, 0.0});
    lp.add_row(vec({1.0, 1.0, 0.0}), LpRelation::less_equal, 1.0);
    lp.add_row(vec({0.0, 1.0, 1.0}), LpRelation::less_equal, 1.0);
    lp.add_row(vec({1.0, 0.0, 1.0}), LpRelation::less_equal, 1.0);
    auto a = solve_lp(lp);
    auto b = solve_lp(lp);
    REQUIRE(a.status == LpStatus::optimal);
    CHECK(a.solution == b.solution);
    CHECK(a.objective_value == b.objective_value);
}

TEST_CASE("duality: primal equals b'y") {
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + int(rng.uniform_int(3));
        LinearProgram lp(d);
        lp.sense = trial % 2 == 0 ? LpSense::maximize : LpSense::minimize;
        lp.objective = VectorXd::Zero(d);
        for (int j = 0; j < d; ++j) lp.objective(j) = rng.uniform(-1.0, 1.0);
        for (int j = 0; j < d; ++j) {
            VectorXd e = VectorXd::Zero(d);
            e(j) = 1.0;
            lp.add_row(e, LpRelation::less_equal, rng.uniform(0.5, 2.0));
            lp.add_row(-e, LpRelation::less_equal, rng.uniform(0.5, 2.0));
        }
        auto out = solve_lp(lp);
        REQUIRE(out.status == LpStatus::optimal);
        double dual_obj = 0.0;
        for (std::size_t i = 0; i < lp.rows.size(); ++i)
            dual_obj += out.dual_values(int(i)) * lp.rows[i].rhs;
        CHECK(dual_obj == doctest::Approx(out.objective_value).epsilon(1e-6));
    }
}

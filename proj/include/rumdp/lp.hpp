#pragma once

#include "rumdp/common.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace rumdp {

// Centralized solver tolerances.
namespace lp_tol {
inline constexpr double feasibility = 1e-7;   // max row violation of reported solutions
inline constexpr double reduced_cost = 1e-9;  // optimality threshold
inline constexpr double pivot = 1e-9;         // minimum pivot magnitude
} // namespace lp_tol

enum class LpSense { minimize, maximize };
enum class LpRelation { less_equal, equal, greater_equal };
enum class LpStatus { optimal, infeasible, unbounded };

struct LpRow {
    VectorXd coeffs;
    LpRelation relation;
    double rhs;
};

// A general-form linear program over k variables. Bounds default to
// (-inf, +inf); nonnegativity must be requested explicitly.
struct LinearProgram {
    LpSense sense = LpSense::minimize;
    VectorXd objective;
    std::vector<LpRow> rows;
    VectorXd lower;
    VectorXd upper;

    LinearProgram() = default;
    explicit LinearProgram(int k)
        : objective(VectorXd::Zero(k)),
          lower(VectorXd::Constant(k, -std::numeric_limits<double>::infinity())),
          upper(VectorXd::Constant(k, std::numeric_limits<double>::infinity())) {}

    int num_vars() const { return int(objective.size()); }

    void add_row(const VectorXd& coeffs, LpRelation rel, double rhs) {
        rows.push_back(LpRow{coeffs, rel, rhs});
    }
};

struct LpOutcome {
    LpStatus status = LpStatus::optimal;
    VectorXd solution;       // length k, valid when optimal
    double objective_value = 0.0;
    VectorXd dual_values;    // one multiplier per input row, valid when optimal;
                             // satisfies b'y = objective for LPs whose variable
                             // bounds are (-inf,inf) or [0,inf)
};

// Dense two-phase simplex with a Dantzig rule that degrades to Bland's rule
// under stalling, so it terminates on degenerate inputs. Deterministic:
// identical programs produce identical outcomes. Throws RumdpError
// (numerical_failure) if the pivot budget is exhausted.
LpOutcome solve_lp(const LinearProgram& lp);

} // namespace rumdp

#include "rumdp/lp.hpp"

#include <algorithm>
#include <cmath>

namespace rumdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How each original variable maps onto nonnegative internal variables.
struct VarMap {
    enum Kind { shift_lo, mirror_hi, split } kind;
    int col;        // first internal column
    double offset;  // lo for shift_lo, hi for mirror_hi
};

struct Tableau {
    // rows x (cols + 1); last column is the rhs.
    MatrixXd t;
    std::vector<int> basis;        // basic internal column per row
    VectorXd cost;                 // phase-2 cost over internal columns
    VectorXd obj_row;              // current reduced-cost row (z_j - c_j form)
    double obj_shift = 0.0;
    int num_cols = 0;
};

} // namespace

LpOutcome solve_lp(const LinearProgram& lp) {
    const int k = lp.num_vars();
    const int m = int(lp.rows.size());
    for (const auto& row : lp.rows)
        if (int(row.coeffs.size()) != k)
            throw RumdpError(ErrorKind::shape_mismatch, "lp row length != variable count");
    if (!lp.objective.allFinite())
        throw RumdpError(ErrorKind::shape_mismatch, "lp objective has non-finite entries");

    const bool maximize = lp.sense == LpSense::maximize;

    // --- Map variables to nonnegative internal variables. -------------------
    std::vector<VarMap> vmap(static_cast<std::size_t>(k), VarMap{});
    int n_internal = 0;
    for (int j = 0; j < k; ++j) {
        const double lo = lp.lower.size() ? lp.lower(j) : -kInf;
        const double hi = lp.upper.size() ? lp.upper(j) : kInf;
        if (lo > hi + 1e-12)
            return LpOutcome{LpStatus::infeasible, {}, 0.0, {}};
        if (std::isfinite(lo)) {
            vmap[j] = {VarMap::shift_lo, n_internal, lo};
            n_internal += 1;
        } else if (std::isfinite(hi)) {
            vmap[j] = {VarMap::mirror_hi, n_internal, hi};
            n_internal += 1;
        } else {
            vmap[j] = {VarMap::split, n_internal, 0.0};
            n_internal += 2;
        }
    }

    // Internal rows: user rows plus upper-bound rows for doubly-bounded vars.
    struct IRow {
        VectorXd a;       // over internal vars
        LpRelation rel;
        double rhs;
        double flip = 1;  // -1 if the row was negated for rhs >= 0
        int source = -1;  // index into lp.rows, or -1 for a bound row
    };
    std::vector<IRow> irows;
    irows.reserve(std::size_t(m) + std::size_t(k));

    auto translate = [&](const VectorXd& coeffs, double rhs) {
        IRow r;
        r.a = VectorXd::Zero(n_internal);
        r.rhs = rhs;
        for (int j = 0; j < k; ++j) {
            const double c = coeffs(j);
            if (c == 0.0) continue;
            switch (vmap[j].kind) {
            case VarMap::shift_lo:
                r.a(vmap[j].col) += c;
                r.rhs -= c * vmap[j].offset;
                break;
            case VarMap::mirror_hi:
                r.a(vmap[j].col) -= c;
                r.rhs -= c * vmap[j].offset;
                break;
            case VarMap::split:
                r.a(vmap[j].col) += c;
                r.a(vmap[j].col + 1) -= c;
                break;
            }
        }
        return r;
    };

    for (int i = 0; i < m; ++i) {
        IRow r = translate(lp.rows[i].coeffs, lp.rows[i].rhs);
        r.rel = lp.rows[i].relation;
        r.source = i;
        irows.push_back(std::move(r));
    }
    for (int j = 0; j < k; ++j) {
        const double lo = lp.lower.size() ? lp.lower(j) : -kInf;
        const double hi = lp.upper.size() ? lp.upper(j) : kInf;
        if (std::isfinite(lo) && std::isfinite(hi)) {
            // x' <= hi - lo on the shifted variable
            IRow r;
            r.a = VectorXd::Zero(n_internal);
            r.a(vmap[j].col) = 1.0;
            r.rel = LpRelation::less_equal;
            r.rhs = hi - lo;
            irows.push_back(std::move(r));
        }
    }

    // Internal objective (always minimized).
    VectorXd icost = VectorXd::Zero(n_internal);
    double obj_shift = 0.0;
    for (int j = 0; j < k; ++j) {
        double c = lp.objective(j);
        if (maximize) c = -c;
        if (c == 0.0) continue;
        switch (vmap[j].kind) {
        case VarMap::shift_lo:
            icost(vmap[j].col) += c;
            obj_shift += c * vmap[j].offset;
            break;
        case VarMap::mirror_hi:
            icost(vmap[j].col) -= c;
            obj_shift += c * vmap[j].offset;
            break;
        case VarMap::split:
            icost(vmap[j].col) += c;
            icost(vmap[j].col + 1) -= c;
            break;
        }
    }

    // --- Build the tableau: structural | slack/surplus | artificial | rhs ---
    const int mm = int(irows.size());
    for (auto& r : irows) {
        if (r.rhs < 0) {
            r.a = -r.a;
            r.rhs = -r.rhs;
            r.flip = -1;
            if (r.rel == LpRelation::less_equal) r.rel = LpRelation::greater_equal;
            else if (r.rel == LpRelation::greater_equal) r.rel = LpRelation::less_equal;
        }
    }
    int n_slack = 0, n_art = 0;
    for (const auto& r : irows) {
        if (r.rel != LpRelation::equal) ++n_slack;
        if (r.rel != LpRelation::less_equal) ++n_art;
    }
    const int total = n_internal + n_slack + n_art;
    MatrixXd t = MatrixXd::Zero(mm, total + 1);
    std::vector<int> basis(std::size_t(mm), -1);
    std::vector<bool> is_artificial(std::size_t(total), false);

    int scol = n_internal, acol = n_internal + n_slack;
    for (int i = 0; i < mm; ++i) {
        t.block(i, 0, 1, n_internal) = irows[i].a.transpose();
        t(i, total) = irows[i].rhs;
        switch (irows[i].rel) {
        case LpRelation::less_equal:
            t(i, scol) = 1.0;
            basis[i] = scol;
            ++scol;
            break;
        case LpRelation::greater_equal:
            t(i, scol) = -1.0;
            ++scol;
            t(i, acol) = 1.0;
            basis[i] = acol;
            is_artificial[std::size_t(acol)] = true;
            ++acol;
            break;
        case LpRelation::equal:
            t(i, acol) = 1.0;
            basis[i] = acol;
            is_artificial[std::size_t(acol)] = true;
            ++acol;
            break;
        }
    }

    // Original tableau kept for the final refactorization.
    const MatrixXd t0 = t;

    const long pivot_budget = 2000L + 200L * (long(mm) + long(total));
    const long bland_after = 50L + 2L * (long(mm) + long(total));
    long pivots = 0;

    // Reduced-cost row maintained as (c_j - z_j); entering when < -tol.
    VectorXd objrow(total + 1);

    // cost may be shorter than the tableau (structural costs only); slack and
    // artificial columns cost zero.
    auto rebuild_objrow = [&](const VectorXd& cost) {
        objrow.setZero();
        objrow.head(cost.size()) = cost;
        for (int i = 0; i < mm; ++i) {
            const double cb = basis[i] < int(cost.size()) ? cost(basis[i]) : 0.0;
            if (cb != 0.0) objrow -= cb * t.row(i).transpose();
        }
    };

    auto pivot_at = [&](int row, int col) {
        t.row(row) /= t(row, col);
        for (int i = 0; i < mm; ++i) {
            if (i == row) continue;
            const double f = t(i, col);
            if (f != 0.0) t.row(i) -= f * t.row(row);
        }
        const double f = objrow(col);
        if (f != 0.0) objrow -= f * t.row(row).transpose();
        basis[row] = col;
        ++pivots;
    };

    // Returns true if an optimum was reached, false on unbounded.
    auto run_simplex = [&](bool allow_artificial_entering) -> bool {
        long stall = 0;
        double last_obj = objrow(total);
        for (;;) {
            if (pivots > pivot_budget)
                throw RumdpError(ErrorKind::numerical_failure,
                                 "simplex pivot budget exhausted");
            const bool bland = stall > bland_after;
            int enter = -1;
            double best = -lp_tol::reduced_cost;
            for (int j = 0; j < total; ++j) {
                if (!allow_artificial_entering && is_artificial[std::size_t(j)]) continue;
                const double rc = objrow(j);
                if (rc < best) {
                    if (bland) { enter = j; break; }  // smallest index with rc < -tol
                    best = rc;
                    enter = j;
                }
            }
            if (enter < 0) return true;

            int leave = -1;
            double best_ratio = kInf;
            for (int i = 0; i < mm; ++i) {
                const double a = t(i, enter);
                if (a > lp_tol::pivot) {
                    const double ratio = t(i, total) / a;
                    if (ratio < best_ratio - 1e-12) {
                        best_ratio = ratio;
                        leave = i;
                    } else if (ratio < best_ratio + 1e-12 && leave >= 0) {
                        // Ties: Bland wants the smallest basic index for
                        // termination; otherwise prefer the largest pivot
                        // for numerical stability.
                        const bool take = bland ? basis[i] < basis[leave]
                                                : a > t(leave, enter);
                        if (take) {
                            best_ratio = std::min(best_ratio, ratio);
                            leave = i;
                        }
                    }
                }
            }
            if (leave < 0) return false;  // unbounded direction

            pivot_at(leave, enter);
            // objrow(total) holds the negated objective, so progress raises it.
            const double obj = objrow(total);
            if (obj > last_obj + 1e-12) { stall = 0; last_obj = obj; }
            else ++stall;
        }
    };

    // --- Phase 1 ------------------------------------------------------------
    if (n_art > 0) {
        VectorXd phase1 = VectorXd::Zero(total);
        for (int j = 0; j < total; ++j)
            if (is_artificial[std::size_t(j)]) phase1(j) = 1.0;
        rebuild_objrow(phase1);
        run_simplex(true);  // bounded below by zero, cannot be unbounded
        const double infeas = -objrow(total);
        if (infeas > lp_tol::feasibility)
            return LpOutcome{LpStatus::infeasible, {}, 0.0, {}};
        // Drive remaining artificials out of the basis where possible,
        // pivoting on the largest eligible element.
        for (int i = 0; i < mm; ++i) {
            if (!is_artificial[std::size_t(basis[i])]) continue;
            int col = -1;
            double best_mag = lp_tol::pivot;
            for (int j = 0; j < total; ++j) {
                if (is_artificial[std::size_t(j)]) continue;
                if (std::abs(t(i, j)) > best_mag) {
                    best_mag = std::abs(t(i, j));
                    col = j;
                }
            }
            if (col >= 0) pivot_at(i, col);
            // else: redundant row; the artificial stays basic at zero and is
            // blocked from re-entering in phase 2.
        }
    }

    // --- Phase 2 ------------------------------------------------------------
    rebuild_objrow(icost);
    if (!run_simplex(false))
        return LpOutcome{LpStatus::unbounded, {}, 0.0, {}};

    // --- Final refactorization -------------------------------------------------
    // Pivoting drifts the tableau over long runs; recompute the basic
    // solution and the row duals from the original data through the final
    // basis.
    VectorXd xi = VectorXd::Zero(total);
    VectorXd duals = VectorXd::Zero(m);
    {
        MatrixXd basis_cols(mm, mm);
        VectorXd rhs0(mm), cb(mm);
        for (int i = 0; i < mm; ++i) {
            basis_cols.col(i) = t0.col(basis[i]).head(mm);
            rhs0(i) = t0(i, total);
            cb(i) = basis[i] < n_internal ? icost(basis[i]) : 0.0;
        }
        Eigen::PartialPivLU<MatrixXd> lu(basis_cols);
        VectorXd xb = lu.solve(rhs0);
        if ((basis_cols * xb - rhs0).lpNorm<Eigen::Infinity>() < 1e-6) {
            for (int i = 0; i < mm; ++i) xi(basis[i]) = xb(i);
        } else {
            // Near-singular refactorization; keep the tableau values.
            for (int i = 0; i < mm; ++i) xi(basis[i]) = t(i, total);
        }
        VectorXd y = basis_cols.transpose().partialPivLu().solve(cb);
        for (int i = 0; i < mm; ++i) {
            const int src = irows[std::size_t(i)].source;
            if (src < 0) continue;
            double value = y(i) * irows[std::size_t(i)].flip;
            if (maximize) value = -value;
            duals(src) = value;
        }
    }

    VectorXd x(k);
    for (int j = 0; j < k; ++j) {
        switch (vmap[j].kind) {
        case VarMap::shift_lo: x(j) = vmap[j].offset + xi(vmap[j].col); break;
        case VarMap::mirror_hi: x(j) = vmap[j].offset - xi(vmap[j].col); break;
        case VarMap::split: x(j) = xi(vmap[j].col) - xi(vmap[j].col + 1); break;
        }
    }

    double obj = icost.dot(xi.head(n_internal)) + obj_shift;
    if (maximize) obj = -obj;

    // Defensive feasibility audit of the reported point.
    double worst = 0.0;
    for (const auto& row : lp.rows) {
        const double lhs = row.coeffs.dot(x);
        double v = 0.0;
        if (row.relation == LpRelation::less_equal) v = lhs - row.rhs;
        else if (row.relation == LpRelation::greater_equal) v = row.rhs - lhs;
        else v = std::abs(lhs - row.rhs);
        const double scale = 1.0 + std::abs(row.rhs);
        worst = std::max(worst, v / scale);
    }
    if (worst > 10 * lp_tol::feasibility)
        throw RumdpError(ErrorKind::numerical_failure,
                         "simplex produced an infeasible optimum (violation " +
                             std::to_string(worst) + ")");

    return LpOutcome{LpStatus::optimal, x, obj, duals};
}

} // namespace rumdp

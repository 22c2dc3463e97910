#include "rumdp/reward_polytope.hpp"

#include <cmath>

namespace rumdp {

RewardPolytope::RewardPolytope(MatrixXd a_matrix, VectorXd b_vector, MatrixXd basis)
    : a_matrix_(std::move(a_matrix)), b_vector_(std::move(b_vector)), basis_(std::move(basis)) {
    if (a_matrix_.rows() != b_vector_.size())
        throw RumdpError(ErrorKind::shape_mismatch, "constraint rows/rhs length mismatch");
    if (basis_.cols() != a_matrix_.cols())
        throw RumdpError(ErrorKind::shape_mismatch, "basis columns != constraint columns");
    if (a_matrix_.cols() < 1)
        throw RumdpError(ErrorKind::shape_mismatch, "parameter dimension must be >= 1");
    row_norms_ = a_matrix_.rowwise().norm();
}

VectorXd RewardPolytope::to_full_reward(const VectorXd& w) const {
    if (w.size() != dim())
        throw RumdpError(ErrorKind::shape_mismatch, "parameter vector length mismatch");
    return basis_ * w;
}

bool RewardPolytope::contains(const VectorXd& w, double tol) const {
    if (w.size() != dim())
        throw RumdpError(ErrorKind::shape_mismatch, "parameter vector length mismatch");
    if (num_rows() == 0) return true;
    return ((a_matrix_ * w) - b_vector_).maxCoeff() <= tol;
}

namespace {

// Chebyshev LP: maximize rho s.t. A_i'w + rho*||A_i|| <= b_i, rho >= 0.
LpOutcome chebyshev_lp(const MatrixXd& a, const VectorXd& b, const VectorXd& norms) {
    const int d = int(a.cols());
    LinearProgram lp(d + 1);
    lp.sense = LpSense::maximize;
    lp.objective(d) = 1.0;
    lp.lower(d) = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        VectorXd row(d + 1);
        row.head(d) = a.row(i);
        row(d) = norms(i);
        lp.add_row(row, LpRelation::less_equal, b(i));
    }
    return solve_lp(lp);
}

} // namespace

double RewardPolytope::chebyshev_radius() const {
    LpOutcome out = chebyshev_lp(a_matrix_, b_vector_, row_norms_);
    if (out.status == LpStatus::infeasible)
        throw RumdpError(ErrorKind::infeasible_polytope, "reward polytope is empty");
    if (out.status == LpStatus::unbounded)
        throw RumdpError(ErrorKind::unbounded_polytope, "reward polytope is unbounded");
    return out.solution(dim());
}

RewardPoint RewardPolytope::interior_point() const {
    LpOutcome out = chebyshev_lp(a_matrix_, b_vector_, row_norms_);
    if (out.status == LpStatus::infeasible)
        throw RumdpError(ErrorKind::infeasible_polytope, "reward polytope is empty");
    if (out.status == LpStatus::unbounded)
        throw RumdpError(ErrorKind::unbounded_polytope, "reward polytope is unbounded");
    const double rho = out.solution(dim());
    if (rho <= 1e-12)
        throw RumdpError(ErrorKind::degenerate_polytope,
                         "reward polytope has empty interior (radius " +
                             std::to_string(rho) + ")");
    VectorXd w = out.solution.head(dim());
    return RewardPoint{w, to_full_reward(w)};
}

std::pair<VectorXd, VectorXd> RewardPolytope::bounding_box() const {
    if (bbox_) return *bbox_;
    const int d = dim();
    VectorXd lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
        for (int sign = 0; sign < 2; ++sign) {
            LinearProgram lp(d);
            lp.sense = sign == 0 ? LpSense::minimize : LpSense::maximize;
            lp.objective(j) = 1.0;
            for (int i = 0; i < num_rows(); ++i)
                lp.add_row(a_matrix_.row(i), LpRelation::less_equal, b_vector_(i));
            LpOutcome out = solve_lp(lp);
            if (out.status == LpStatus::infeasible)
                throw RumdpError(ErrorKind::infeasible_polytope, "reward polytope is empty");
            if (out.status == LpStatus::unbounded)
                throw RumdpError(ErrorKind::unbounded_polytope,
                                 "coordinate " + std::to_string(j) + " is unbounded over R");
            (sign == 0 ? lo(j) : hi(j)) = out.objective_value;
        }
    }
    bbox_ = {lo, hi};
    return *bbox_;
}

RewardPoint RewardPolytope::random_interior_point(SplitMix64& rng) const {
    auto [lo, hi] = bounding_box();
    const int d = dim();
    VectorXd w(d);
    for (int attempt = 0; attempt < 64; ++attempt) {
        for (int j = 0; j < d; ++j) w(j) = rng.uniform(lo(j), hi(j));
        if (contains(w, -1e-12)) return RewardPoint{w, to_full_reward(w)};
    }
    // Low acceptance rate: shrink a box sample toward the Chebyshev center.
    const RewardPoint center = interior_point();
    for (int j = 0; j < d; ++j) w(j) = rng.uniform(lo(j), hi(j));
    double shrink = rng.uniform(0.3, 0.9);
    for (int attempt = 0; attempt < 200; ++attempt) {
        VectorXd cand = center.w + shrink * (w - center.w);
        if (contains(cand, -1e-12)) return RewardPoint{cand, to_full_reward(cand)};
        shrink *= 0.5;
    }
    return center;
}

void RewardPolytope::validate(bool require_interior) const {
    bounding_box();  // throws on empty or unbounded
    Eigen::ColPivHouseholderQR<MatrixXd> qr(basis_);
    if (qr.rank() < dim())
        throw RumdpError(ErrorKind::shape_mismatch,
                         "basis is rank-deficient: distinct parameters must give "
                         "distinct rewards");
    if (require_interior) interior_point();  // throws degenerate_polytope
}

} // namespace rumdp

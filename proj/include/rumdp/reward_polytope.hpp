#pragma once

#include "rumdp/common.hpp"
#include "rumdp/lp.hpp"

#include <optional>

namespace rumdp {

struct RewardPoint {
    VectorXd w;  // parameter vector, length d
    VectorXd r;  // cached full reward Phi * w, length n*m
};

// Feasible reward space R = {w | A w <= b} over a d-dimensional parameter
// space, mapped to full state-action rewards by the basis Phi (n*m x d).
// Geometry runs in w-space; full rewards are materialized only for MDP
// evaluation.
class RewardPolytope {
  public:
    RewardPolytope(MatrixXd a_matrix, VectorXd b_vector, MatrixXd basis);

    int dim() const { return int(a_matrix_.cols()); }
    int num_rows() const { return int(a_matrix_.rows()); }
    const MatrixXd& a_matrix() const { return a_matrix_; }
    const VectorXd& b_vector() const { return b_vector_; }
    const MatrixXd& basis() const { return basis_; }

    // Phi w.
    VectorXd to_full_reward(const VectorXd& w) const;

    // max_i (A_i'w - b_i) <= tol.
    bool contains(const VectorXd& w, double tol) const;

    // Chebyshev center: the deterministic "arbitrary interior point".
    // Throws infeasible_polytope / degenerate_polytope (inscribed radius
    // <= 1e-12) / unbounded_polytope.
    RewardPoint interior_point() const;

    // Inscribed ball radius from the Chebyshev LP (0 when degenerate).
    double chebyshev_radius() const;

    // Seeded random point strictly inside R: rejection sampling from the
    // bounding box, falling back to shrinking box samples toward the
    // Chebyshev center when the acceptance rate is poor.
    RewardPoint random_interior_point(SplitMix64& rng) const;

    // Per-coordinate min/max over R, solved by 2d LPs and cached.
    // Throws unbounded_polytope if any coordinate is unbounded.
    std::pair<VectorXd, VectorXd> bounding_box() const;

    // Full invariant check: nonempty, bounded, full-column-rank basis;
    // require_interior additionally demands a positive inscribed radius.
    void validate(bool require_interior) const;

  private:
    MatrixXd a_matrix_;
    VectorXd b_vector_;
    MatrixXd basis_;
    VectorXd row_norms_;
    mutable std::optional<std::pair<VectorXd, VectorXd>> bbox_;
};

} // namespace rumdp

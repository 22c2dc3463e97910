#pragma once

#include "rumdp/mdp.hpp"
#include "rumdp/reward_polytope.hpp"

#include <optional>
#include <vector>

namespace rumdp {

// One linear inequality c'w <= d_h of a reward optimality region, with the
// (s,a) pair it came from. c is unit-norm.
struct Hyperplane {
    VectorXd c;
    double d_h = 0.0;
    int state = -1;
    int action = -1;
};

// The optimality region of a policy: intersection of its hyperplanes with R.
// The anchor is a reward point known to satisfy every hyperplane.
struct OptRegion {
    std::vector<Hyperplane> hyperplanes;
    RewardPoint anchor;
};

// Default facet-crossing offset, scaled by the polytope magnitude.
double default_delta(const RewardPolytope& polytope);

// Builds the reward optimality region of `policy` around parameter w: one
// inequality per (s,a) with a != pi(s), expressing Q(s,a) <= V(s) as a linear
// condition on w. Near-zero rows are dropped and duplicates merged. Throws
// precondition_violated if `policy` is not optimal at w.
OptRegion reward_opt_region(const Mdp& mdp, const RewardPolytope& polytope,
                            const VectorXd& w, const DeterministicPolicy& policy);

// A parameter vector in the region adjacent across hyperplane h, or nullopt
// when crossing h leaves R. Keeps all other hyperplanes and R satisfied while
// reversing h with offset delta; among feasible points, returns the one with
// a maximal minimum slack so it sits strictly inside the adjacent slab.
std::optional<VectorXd> adjacent_reward(const Hyperplane& h, const OptRegion& region,
                                        const RewardPolytope& polytope, double delta);

// Walks the line origin + t * direction out of `region`: at most one point
// just past the first region hyperplane crossed on each side, skipping sides
// where R's own boundary comes first or where the stepped point leaves R.
std::vector<VectorXd> line_exit_points(const OptRegion& region,
                                       const RewardPolytope& polytope,
                                       const VectorXd& origin, const VectorXd& direction,
                                       double delta);

// Chebyshev radius of region ∩ R (0 when the region is thin or empty).
double region_width(const OptRegion& region, const RewardPolytope& polytope);

} // namespace rumdp

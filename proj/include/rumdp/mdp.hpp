#pragma once

#include "rumdp/common.hpp"

#include <utility>
#include <vector>

namespace rumdp {

// Finite discounted MDP without a reward function; rewards live in the
// reward polytope. Transition kernel is dense, laid out as n*m rows of
// length n with row index sa = s * n_actions + a.
struct Mdp {
    int n_states = 0;
    int n_actions = 0;
    MatrixXd transition;  // (n*m) x n
    VectorXd alpha;       // initial state distribution, length n
    double gamma = 0.0;

    int idx(int s, int a) const { return s * n_actions + a; }
    int num_sa() const { return n_states * n_actions; }

    // Throws shape_mismatch / invalid_discount on violated invariants:
    // stochastic rows and alpha within 1e-9, gamma in [0, 1).
    void validate() const;
};

struct DeterministicPolicy {
    std::vector<int> action;  // length n, entries in [0, m)

    bool operator==(const DeterministicPolicy& o) const { return action == o.action; }
};

struct ValueFunction {
    VectorXd v;  // length n
};

struct QFunction {
    VectorXd q;  // length n*m, indexed (s,a)
};

// Discounted state-action visit mass; valid iff gamma*E'f + alpha = 0 and
// f >= 0 (total mass 1/(1-gamma)).
struct OccupancyFrequency {
    VectorXd f;  // length n*m
};

struct PolicyExtraction {
    MatrixXd stochastic;              // n x m, row-stochastic
    DeterministicPolicy deterministic;
};

// E(sa,s') = T(s,a,s') - [s'==s]/gamma. Throws invalid_discount when gamma == 0.
MatrixXd build_e_matrix(const Mdp& mdp);

// Fixed point of V = r_pi + gamma T_pi V, solved directly; residual < 1e-10.
ValueFunction evaluate_policy(const Mdp& mdp, const VectorXd& reward,
                              const DeterministicPolicy& policy);

// q(s,a) = r(s,a) + gamma * sum_s' T(s,a,s') v(s').
QFunction q_function(const Mdp& mdp, const VectorXd& reward, const ValueFunction& v);

// Policy iteration with exact evaluation. Ties broken toward the smallest
// action index within a 1e-9 Q-gap, so the result is deterministic.
std::pair<DeterministicPolicy, ValueFunction> solve_optimal(const Mdp& mdp,
                                                            const VectorXd& reward);

// Occupancy frequency of a deterministic policy from the n x n linear system.
OccupancyFrequency occupancy_of(const Mdp& mdp, const DeterministicPolicy& policy);

// Row-normalized stochastic policy plus argmax extraction; states with
// occupancy mass below 1e-12 get action 0.
PolicyExtraction policy_of(const Mdp& mdp, const OccupancyFrequency& f);

// r'f, the expected discounted return of the occupancy under this reward.
double value_of_occupancy(const VectorXd& reward, const OccupancyFrequency& f);

} // namespace rumdp

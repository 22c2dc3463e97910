#pragma once

#include "rumdp/enumerate.hpp"

#include <vector>

namespace rumdp {

// One constraint-generation pair: an adversarial nondominated occupancy and
// the reward parameter that maximizes regret against the current solution.
struct AdversarialPair {
    std::size_t gamma_index = 0;  // index into the nondominated set
    OccupancyFrequency g;
    VectorXd r_w;
};

struct RegretSolution {
    double regret = 0.0;                 // delta, the minimax regret value
    VectorXd weights;                    // convex weights over Gamma (may be empty)
    OccupancyFrequency occupancy;        // mixture occupancy (always populated)
    std::vector<std::size_t> support;    // entries with weight > 1e-9
    std::vector<AdversarialPair> gen_pairs;
    std::vector<double> delta_history;   // master value per iteration (icg-nd)
    std::int64_t iterations = 0;
    std::int64_t lp_count = 0;
    double wall_ms = 0.0;
    bool converged = true;
};

// Max regret of occupancy f over R against adversaries in gamma_set: solves
// one LP per g and returns the worst pair with its objective. Ties break to
// the lowest Gamma index.
std::pair<AdversarialPair, double> max_regret(const VectorXd& f,
                                              const NondominatedSet& gamma_set,
                                              const RewardPolytope& polytope,
                                              std::int64_t* lp_counter = nullptr,
                                              int threads = 1);

// Constraint generation: alternates the master LP (min delta over valid
// occupancies against the pairs collected so far) with max_regret until the
// gap closes within tol.
RegretSolution solve_icg_nd(const Mdp& mdp, const RewardPolytope& polytope,
                            const NondominatedSet& gamma_set, double tol = 1e-6,
                            std::int64_t max_iterations = 10000, int threads = 1);

// The one-shot minimax regret LP over mixtures of Gamma, with one dual block
// z_i >= 0 per adversarial column.
RegretSolution solve_xu_mannor(const RewardPolytope& polytope,
                               const NondominatedSet& gamma_set);

// Max regret of a mixture given as weights over Gamma.
double evaluate_regret(const VectorXd& weights, const NondominatedSet& gamma_set,
                       const RewardPolytope& polytope, std::int64_t* lp_counter = nullptr);

// Max regret of an explicit occupancy vector.
double evaluate_regret_occupancy(const VectorXd& f, const NondominatedSet& gamma_set,
                                 const RewardPolytope& polytope,
                                 std::int64_t* lp_counter = nullptr);

} // namespace rumdp

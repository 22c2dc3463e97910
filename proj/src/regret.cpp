#include "rumdp/regret.hpp"

#include "rumdp/lp.hpp"

#include <chrono>
#include <cmath>

namespace rumdp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

} // namespace

std::pair<AdversarialPair, double> max_regret(const VectorXd& f,
                                              const NondominatedSet& gamma_set,
                                              const RewardPolytope& polytope,
                                              std::int64_t* lp_counter, int threads) {
    if (gamma_set.size() == 0)
        throw RumdpError(ErrorKind::usage_error, "max_regret needs a nonempty Gamma");
    const int d = polytope.dim();
    const VectorXd f_proj = polytope.basis().transpose() * f;

    std::vector<double> values(gamma_set.size());
    std::vector<VectorXd> witnesses(gamma_set.size());
    parallel_for(gamma_set.size(), threads, [&](std::size_t i) {
        // maximize (Phi w)'(g_i - f) over w in R
        LinearProgram lp(d);
        lp.sense = LpSense::maximize;
        lp.objective =
            polytope.basis().transpose() * gamma_set[i].occupancy.f - f_proj;
        for (int r = 0; r < polytope.num_rows(); ++r)
            lp.add_row(polytope.a_matrix().row(r), LpRelation::less_equal,
                       polytope.b_vector()(r));
        LpOutcome out = solve_lp(lp);
        if (out.status != LpStatus::optimal)
            throw RumdpError(ErrorKind::numerical_failure, "regret LP not optimal");
        values[i] = out.objective_value;
        witnesses[i] = out.solution;
    });
    if (lp_counter) *lp_counter += std::int64_t(gamma_set.size());

    std::size_t best = 0;
    for (std::size_t i = 1; i < gamma_set.size(); ++i)
        if (values[i] > values[best]) best = i;  // ties keep the lowest index

    AdversarialPair pair{best, gamma_set[best].occupancy, witnesses[best]};
    return {std::move(pair), values[best]};
}

RegretSolution solve_icg_nd(const Mdp& mdp, const RewardPolytope& polytope,
                            const NondominatedSet& gamma_set, double tol,
                            std::int64_t max_iterations, int threads) {
    if (gamma_set.size() == 0)
        throw RumdpError(ErrorKind::usage_error, "solve_icg_nd needs a nonempty Gamma");
    if (tol <= 0)
        throw RumdpError(ErrorKind::usage_error, "tolerance must be positive");
    const auto t0 = Clock::now();
    const int nm = mdp.num_sa(), n = mdp.n_states;
    const MatrixXd e = build_e_matrix(mdp);

    RegretSolution sol;

    // Seed GEN with the Chebyshev-center reward and its optimal policy, so
    // the first master LP is feasible and bounded.
    {
        RewardPoint center = polytope.interior_point();
        ++sol.lp_count;
        auto [policy, value] = solve_optimal(mdp, center.r);
        OccupancyFrequency g = occupancy_of(mdp, policy);
        std::size_t index = 0;
        PolicyKey key = canonical_key(mdp, policy, g);
        for (std::size_t i = 0; i < gamma_set.size(); ++i)
            if (gamma_set.key_of(i) == key) { index = i; break; }
        sol.gen_pairs.push_back(AdversarialPair{index, std::move(g), center.w});
    }

    VectorXd f = VectorXd::Zero(nm);
    double delta = 0.0;
    bool converged = false;
    while (sol.iterations < max_iterations) {
        ++sol.iterations;

        // Master: min delta s.t. r_i'g_i - r_i'f <= delta for GEN,
        // gamma E'f + alpha = 0, f >= 0.
        LinearProgram master(nm + 1);
        master.sense = LpSense::minimize;
        master.objective(nm) = 1.0;
        for (int j = 0; j < nm; ++j) master.lower(j) = 0.0;
        for (const auto& pair : sol.gen_pairs) {
            const VectorXd r_full = polytope.to_full_reward(pair.r_w);
            VectorXd row(nm + 1);
            row.head(nm) = -r_full;
            row(nm) = -1.0;
            master.add_row(row, LpRelation::less_equal, -r_full.dot(pair.g.f));
        }
        for (int sprime = 0; sprime < n; ++sprime) {
            VectorXd row(nm + 1);
            row.head(nm) = mdp.gamma * e.col(sprime);
            row(nm) = 0.0;
            master.add_row(row, LpRelation::equal, -mdp.alpha(sprime));
        }
        ++sol.lp_count;
        LpOutcome out = solve_lp(master);
        if (out.status != LpStatus::optimal)
            throw RumdpError(ErrorKind::numerical_failure, "ICG master LP not optimal");
        f = out.solution.head(nm);
        delta = out.solution(nm);
        sol.delta_history.push_back(delta);

        auto [pair, worst] = max_regret(f, gamma_set, polytope, &sol.lp_count, threads);
        if (worst <= delta + tol) {
            converged = true;
            break;
        }
        sol.gen_pairs.push_back(std::move(pair));
    }

    sol.regret = delta;
    sol.occupancy = OccupancyFrequency{f};
    sol.converged = converged;
    sol.wall_ms = ms_since(t0);
    return sol;
}

RegretSolution solve_xu_mannor(const RewardPolytope& polytope,
                               const NondominatedSet& gamma_set) {
    const std::size_t k = gamma_set.size();
    if (k == 0)
        throw RumdpError(ErrorKind::usage_error, "solve_xu_mannor needs a nonempty Gamma");
    const auto t0 = Clock::now();
    const int d = polytope.dim();
    const int rows_r = polytope.num_rows();

    // Projected columns of Gamma-hat: column i is Phi'g_i.
    MatrixXd proj(d, int(k));
    for (std::size_t i = 0; i < k; ++i)
        proj.col(int(i)) = polytope.basis().transpose() * gamma_set[i].occupancy.f;

    // Variables: c (k, >= 0), delta (free), z_i (rows_r each, >= 0).
    const int nv = int(k) + 1 + rows_r * int(k);
    const int delta_col = int(k);
    auto z_col = [&](std::size_t i, int r) { return int(k) + 1 + int(i) * rows_r + r; };

    LinearProgram lp(nv);
    lp.sense = LpSense::minimize;
    lp.objective(delta_col) = 1.0;
    for (std::size_t i = 0; i < k; ++i) lp.lower(int(i)) = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (int r = 0; r < rows_r; ++r) lp.lower(z_col(i, r)) = 0.0;

    {
        VectorXd row = VectorXd::Zero(nv);
        for (std::size_t i = 0; i < k; ++i) row(int(i)) = 1.0;
        lp.add_row(row, LpRelation::equal, 1.0);
    }
    for (std::size_t i = 0; i < k; ++i) {
        // delta >= b'z_i
        VectorXd row = VectorXd::Zero(nv);
        row(delta_col) = -1.0;
        for (int r = 0; r < rows_r; ++r) row(z_col(i, r)) = polytope.b_vector()(r);
        lp.add_row(row, LpRelation::less_equal, 0.0);
        // A'z_i + (Phi'Gamma-hat) c = Phi'g_i   (d equality rows)
        for (int j = 0; j < d; ++j) {
            VectorXd eq = VectorXd::Zero(nv);
            for (int r = 0; r < rows_r; ++r) eq(z_col(i, r)) = polytope.a_matrix()(r, j);
            for (std::size_t l = 0; l < k; ++l) eq(int(l)) = proj(j, int(l));
            lp.add_row(eq, LpRelation::equal, proj(j, int(i)));
        }
    }

    RegretSolution sol;
    ++sol.lp_count;
    LpOutcome out = solve_lp(lp);
    if (out.status != LpStatus::optimal)
        throw RumdpError(ErrorKind::numerical_failure,
                         "minimax regret LP not optimal (status " +
                             std::to_string(int(out.status)) + ")");

    sol.regret = out.solution(delta_col);
    sol.weights = out.solution.head(int(k));
    VectorXd f = VectorXd::Zero(gamma_set[0].occupancy.f.size());
    for (std::size_t i = 0; i < k; ++i) {
        f += sol.weights(int(i)) * gamma_set[i].occupancy.f;
        if (sol.weights(int(i)) > 1e-9) sol.support.push_back(i);
    }
    sol.occupancy = OccupancyFrequency{std::move(f)};
    sol.iterations = 1;
    sol.wall_ms = ms_since(t0);
    return sol;
}

double evaluate_regret(const VectorXd& weights, const NondominatedSet& gamma_set,
                       const RewardPolytope& polytope, std::int64_t* lp_counter) {
    if (std::size_t(weights.size()) != gamma_set.size())
        throw RumdpError(ErrorKind::shape_mismatch, "weights length != |Gamma|");
    VectorXd f = VectorXd::Zero(gamma_set[0].occupancy.f.size());
    for (std::size_t i = 0; i < gamma_set.size(); ++i)
        f += weights(int(i)) * gamma_set[i].occupancy.f;
    return evaluate_regret_occupancy(f, gamma_set, polytope, lp_counter);
}

double evaluate_regret_occupancy(const VectorXd& f, const NondominatedSet& gamma_set,
                                 const RewardPolytope& polytope,
                                 std::int64_t* lp_counter) {
    return max_regret(f, gamma_set, polytope, lp_counter).second;
}

} // namespace rumdp

#include "rumdp/mdp.hpp"

#include <algorithm>
#include <cmath>

namespace rumdp {

namespace {

// (I - gamma T_pi) as a dense n x n matrix.
MatrixXd policy_system(const Mdp& mdp, const DeterministicPolicy& policy) {
    const int n = mdp.n_states;
    MatrixXd sys = MatrixXd::Identity(n, n);
    for (int s = 0; s < n; ++s)
        sys.row(s) -= mdp.gamma * mdp.transition.row(mdp.idx(s, policy.action[s]));
    return sys;
}

VectorXd solve_checked(const MatrixXd& a, const VectorXd& b, double residual_tol) {
    VectorXd x = a.partialPivLu().solve(b);
    double res = (a * x - b).lpNorm<Eigen::Infinity>();
    if (res >= residual_tol) {
        x = a.fullPivLu().solve(b);
        res = (a * x - b).lpNorm<Eigen::Infinity>();
        if (res >= residual_tol)
            throw RumdpError(ErrorKind::linear_solve_failure,
                             "linear solve residual " + std::to_string(res));
    }
    return x;
}

} // namespace

void Mdp::validate() const {
    if (n_states <= 0 || n_actions <= 0)
        throw RumdpError(ErrorKind::shape_mismatch, "mdp needs positive state/action counts");
    if (transition.rows() != num_sa() || transition.cols() != n_states)
        throw RumdpError(ErrorKind::shape_mismatch, "transition kernel shape mismatch");
    if (alpha.size() != n_states)
        throw RumdpError(ErrorKind::shape_mismatch, "alpha length mismatch");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw RumdpError(ErrorKind::invalid_discount, "gamma must lie in [0, 1)");
    for (int r = 0; r < transition.rows(); ++r) {
        if (transition.row(r).minCoeff() < 0.0)
            throw RumdpError(ErrorKind::shape_mismatch,
                             "negative transition probability in row " + std::to_string(r));
        if (std::abs(transition.row(r).sum() - 1.0) > 1e-9)
            throw RumdpError(ErrorKind::shape_mismatch,
                             "transition row " + std::to_string(r) + " does not sum to 1");
    }
    if (alpha.minCoeff() < 0.0 || std::abs(alpha.sum() - 1.0) > 1e-9)
        throw RumdpError(ErrorKind::shape_mismatch, "alpha is not a distribution");
}

MatrixXd build_e_matrix(const Mdp& mdp) {
    if (mdp.gamma == 0.0)
        throw RumdpError(ErrorKind::invalid_discount, "E matrix undefined for gamma = 0");
    MatrixXd e = mdp.transition;
    const double inv_gamma = 1.0 / mdp.gamma;
    for (int s = 0; s < mdp.n_states; ++s)
        for (int a = 0; a < mdp.n_actions; ++a)
            e(mdp.idx(s, a), s) -= inv_gamma;
    return e;
}

ValueFunction evaluate_policy(const Mdp& mdp, const VectorXd& reward,
                              const DeterministicPolicy& policy) {
    if (reward.size() != mdp.num_sa())
        throw RumdpError(ErrorKind::shape_mismatch, "reward length mismatch");
    const int n = mdp.n_states;
    VectorXd r_pi(n);
    for (int s = 0; s < n; ++s) r_pi(s) = reward(mdp.idx(s, policy.action[s]));
    return ValueFunction{solve_checked(policy_system(mdp, policy), r_pi, 1e-10)};
}

QFunction q_function(const Mdp& mdp, const VectorXd& reward, const ValueFunction& v) {
    if (reward.size() != mdp.num_sa() || v.v.size() != mdp.n_states)
        throw RumdpError(ErrorKind::shape_mismatch, "q_function shape mismatch");
    return QFunction{reward + mdp.gamma * (mdp.transition * v.v)};
}

std::pair<DeterministicPolicy, ValueFunction> solve_optimal(const Mdp& mdp,
                                                            const VectorXd& reward) {
    const int n = mdp.n_states, m = mdp.n_actions;
    constexpr double tie_gap = 1e-9;

    auto greedy = [&](const QFunction& q) {
        DeterministicPolicy pi;
        pi.action.assign(std::size_t(n), 0);
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < m; ++a) best = std::max(best, q.q(mdp.idx(s, a)));
            for (int a = 0; a < m; ++a) {
                if (q.q(mdp.idx(s, a)) >= best - tie_gap) {
                    pi.action[std::size_t(s)] = a;
                    break;
                }
            }
        }
        return pi;
    };

    DeterministicPolicy pi;
    pi.action.assign(std::size_t(n), 0);
    ValueFunction v = evaluate_policy(mdp, reward, pi);
    const int max_iters = 50 + n * m;
    for (int it = 0; it < max_iters; ++it) {
        QFunction q = q_function(mdp, reward, v);
        DeterministicPolicy next = greedy(q);
        if (next == pi) return {pi, v};
        pi = std::move(next);
        v = evaluate_policy(mdp, reward, pi);
    }
    // Policy iteration failed to settle; accept the last iterate only if it
    // satisfies Bellman optimality.
    QFunction q = q_function(mdp, reward, v);
    double slack = 0.0;
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < m; ++a)
            slack = std::max(slack, q.q(mdp.idx(s, a)) - v.v(s));
    if (slack > 1e-8)
        throw RumdpError(ErrorKind::numerical_failure,
                         "policy iteration did not converge (slack " +
                             std::to_string(slack) + ")");
    return {greedy(q), v};
}

OccupancyFrequency occupancy_of(const Mdp& mdp, const DeterministicPolicy& policy) {
    const int n = mdp.n_states;
    if (int(policy.action.size()) != n)
        throw RumdpError(ErrorKind::shape_mismatch, "policy length mismatch");
    for (int s = 0; s < n; ++s)
        if (policy.action[std::size_t(s)] < 0 || policy.action[std::size_t(s)] >= mdp.n_actions)
            throw RumdpError(ErrorKind::shape_mismatch, "policy action out of range");
    // State occupancy solves (I - gamma T_pi') f' = alpha.
    VectorXd f_state =
        solve_checked(policy_system(mdp, policy).transpose(), mdp.alpha, 1e-8);
    VectorXd f = VectorXd::Zero(mdp.num_sa());
    for (int s = 0; s < n; ++s) f(mdp.idx(s, policy.action[std::size_t(s)])) = f_state(s);
    return OccupancyFrequency{std::move(f)};
}

PolicyExtraction policy_of(const Mdp& mdp, const OccupancyFrequency& f) {
    if (f.f.size() != mdp.num_sa())
        throw RumdpError(ErrorKind::shape_mismatch, "occupancy length mismatch");
    const int n = mdp.n_states, m = mdp.n_actions;
    PolicyExtraction out;
    out.stochastic = MatrixXd::Zero(n, m);
    out.deterministic.action.assign(std::size_t(n), 0);
    for (int s = 0; s < n; ++s) {
        double mass = 0.0;
        for (int a = 0; a < m; ++a) mass += f.f(mdp.idx(s, a));
        if (mass < 1e-12) {
            out.stochastic(s, 0) = 1.0;  // zero-mass convention: action 0
            continue;
        }
        int best = 0;
        for (int a = 0; a < m; ++a) {
            out.stochastic(s, a) = f.f(mdp.idx(s, a)) / mass;
            if (f.f(mdp.idx(s, a)) > f.f(mdp.idx(s, best))) best = a;
        }
        out.deterministic.action[std::size_t(s)] = best;
    }
    return out;
}

double value_of_occupancy(const VectorXd& reward, const OccupancyFrequency& f) {
    if (reward.size() != f.f.size())
        throw RumdpError(ErrorKind::shape_mismatch, "reward/occupancy length mismatch");
    return reward.dot(f.f);
}

} // namespace rumdp

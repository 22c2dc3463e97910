#include "rumdp/geometry.hpp"

#include "rumdp/lp.hpp"

#include <cmath>

namespace rumdp {

double default_delta(const RewardPolytope& polytope) {
    const double b_inf =
        polytope.num_rows() ? polytope.b_vector().cwiseAbs().maxCoeff() : 0.0;
    return 1e-6 * (1.0 + b_inf);
}

OptRegion reward_opt_region(const Mdp& mdp, const RewardPolytope& polytope,
                            const VectorXd& w, const DeterministicPolicy& policy) {
    const int n = mdp.n_states, m = mdp.n_actions, d = polytope.dim();
    if (w.size() != d)
        throw RumdpError(ErrorKind::shape_mismatch, "parameter vector length mismatch");

    // V(w) = (I - gamma T_pi)^{-1} Phi_pi w is linear in w; columns of
    // v_basis map parameters to state values under this policy.
    MatrixXd phi_pi(n, d);
    for (int s = 0; s < n; ++s)
        phi_pi.row(s) = polytope.basis().row(mdp.idx(s, policy.action[std::size_t(s)]));
    MatrixXd sys = MatrixXd::Identity(n, n);
    for (int s = 0; s < n; ++s)
        sys.row(s) -= mdp.gamma * mdp.transition.row(mdp.idx(s, policy.action[std::size_t(s)]));
    MatrixXd v_basis = sys.partialPivLu().solve(phi_pi);  // n x d

    OptRegion region;
    region.anchor = RewardPoint{w, polytope.to_full_reward(w)};

    double worst_slack = 0.0;
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < m; ++a) {
            if (a == policy.action[std::size_t(s)]) continue;  // reduces to 0 <= 0
            // Q(s,a) - V(s) as a linear functional of w:
            //   Phi(sa,:) + gamma T(sa,:) v_basis - v_basis(s,:)
            VectorXd c = polytope.basis().row(mdp.idx(s, a)).transpose();
            c += (mdp.gamma * (mdp.transition.row(mdp.idx(s, a)) * v_basis)).transpose();
            c -= v_basis.row(s).transpose();

            worst_slack = std::max(worst_slack, c.dot(w));

            const double norm = c.norm();
            if (norm < 1e-12) continue;
            c /= norm;

            bool duplicate = false;
            for (const auto& h : region.hyperplanes) {
                if ((h.c - c).lpNorm<Eigen::Infinity>() <= 1e-9 &&
                    std::abs(h.d_h) <= 1e-9) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate)
                region.hyperplanes.push_back(Hyperplane{std::move(c), 0.0, s, a});
        }
    }

    // The un-normalized row value at w IS the Bellman slack Q(s,a) - V(s);
    // a positive one means the policy is not optimal at w.
    if (worst_slack > 1e-7)
        throw RumdpError(ErrorKind::precondition_violated,
                         "policy is not optimal at the given parameter (slack " +
                             std::to_string(worst_slack) + ")");
    return region;
}

namespace {

// One crossing LP: keeps R and the non-reversed hyperplanes (with slack eps,
// maximized so the point avoids their vertices), reverses h at offset delta,
// and optionally caps the crossing depth so the point stays in a thin shell
// just past the facet.
std::optional<VectorXd> crossing_point(const Hyperplane& h, const OptRegion& region,
                                       const RewardPolytope& polytope, double delta,
                                       double depth_cap) {
    const int d = polytope.dim();
    LinearProgram lp(d + 1);
    lp.sense = LpSense::maximize;
    lp.objective(d) = 1.0;
    lp.lower(d) = 0.0;

    for (int i = 0; i < polytope.num_rows(); ++i) {
        const double norm = polytope.a_matrix().row(i).norm();
        if (norm < 1e-15) continue;
        VectorXd row(d + 1);
        row.head(d) = polytope.a_matrix().row(i) / norm;
        row(d) = 1.0;
        lp.add_row(row, LpRelation::less_equal, polytope.b_vector()(i) / norm);
    }
    for (const auto& other : region.hyperplanes) {
        VectorXd row(d + 1);
        const bool reversed =
            &other == &h || (other.state == h.state && other.action == h.action);
        if (reversed) {
            // c_h'w >= d_h + delta; no eps padding on the crossing rows.
            row.head(d) = -other.c;
            row(d) = 0.0;
            lp.add_row(row, LpRelation::less_equal, -(other.d_h + delta));
            if (depth_cap > 0) {
                VectorXd cap(d + 1);
                cap.head(d) = other.c;
                cap(d) = 0.0;
                lp.add_row(cap, LpRelation::less_equal, other.d_h + depth_cap);
            }
        } else {
            row.head(d) = other.c;
            row(d) = 1.0;
            lp.add_row(row, LpRelation::less_equal, other.d_h);
        }
    }

    LpOutcome out = solve_lp(lp);
    if (out.status == LpStatus::infeasible) return std::nullopt;
    if (out.status != LpStatus::optimal)
        throw RumdpError(ErrorKind::numerical_failure, "adjacent-region LP unbounded");
    return out.solution.head(d);
}

} // namespace

std::optional<VectorXd> adjacent_reward(const Hyperplane& h, const OptRegion& region,
                                        const RewardPolytope& polytope, double delta) {
    if (delta <= 0.0)
        throw RumdpError(ErrorKind::usage_error, "delta must be positive");
    // A thin shell just past the facet keeps the point inside a region that
    // actually borders h; the full slab can reach past small neighbors. An
    // empty shell means h carries no facet piece of region ∩ R (redundant or
    // grazing), so there is no adjacency to explore across it.
    return crossing_point(h, region, polytope, delta, 2.0 * delta);
}

std::vector<VectorXd> line_exit_points(const OptRegion& region,
                                       const RewardPolytope& polytope,
                                       const VectorXd& origin, const VectorXd& direction,
                                       double delta) {
    constexpr double parallel_tol = 1e-12;
    double t_pos = std::numeric_limits<double>::infinity();
    double t_neg = -std::numeric_limits<double>::infinity();
    for (const auto& h : region.hyperplanes) {
        const double denom = h.c.dot(direction);
        if (std::abs(denom) <= parallel_tol) continue;
        const double t = (h.d_h - h.c.dot(origin)) / denom;
        if (t > 0 && t < t_pos) t_pos = t;
        if (t < 0 && t > t_neg) t_neg = t;
    }
    // First crossing of R's own boundary on each side.
    double r_pos = std::numeric_limits<double>::infinity();
    double r_neg = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < polytope.num_rows(); ++i) {
        const double denom = polytope.a_matrix().row(i).dot(direction);
        if (std::abs(denom) <= parallel_tol) continue;
        const double t =
            (polytope.b_vector()(i) - polytope.a_matrix().row(i).dot(origin)) / denom;
        if (t > 0 && t < r_pos) r_pos = t;
        if (t < 0 && t > r_neg) r_neg = t;
    }

    std::vector<VectorXd> out;
    if (std::isfinite(t_pos) && !(r_pos < t_pos)) {
        VectorXd w = origin + (t_pos + delta) * direction;
        if (polytope.contains(w, 1e-9)) out.push_back(std::move(w));
    }
    if (std::isfinite(t_neg) && !(r_neg > t_neg)) {
        VectorXd w = origin + (t_neg - delta) * direction;
        if (polytope.contains(w, 1e-9)) out.push_back(std::move(w));
    }
    return out;
}

double region_width(const OptRegion& region, const RewardPolytope& polytope) {
    const int d = polytope.dim();
    LinearProgram lp(d + 1);
    lp.sense = LpSense::maximize;
    lp.objective(d) = 1.0;
    lp.lower(d) = 0.0;
    for (int i = 0; i < polytope.num_rows(); ++i) {
        const double norm = polytope.a_matrix().row(i).norm();
        if (norm < 1e-15) continue;
        VectorXd row(d + 1);
        row.head(d) = polytope.a_matrix().row(i) / norm;
        row(d) = 1.0;
        lp.add_row(row, LpRelation::less_equal, polytope.b_vector()(i) / norm);
    }
    for (const auto& h : region.hyperplanes) {
        VectorXd row(d + 1);
        row.head(d) = h.c;
        row(d) = 1.0;
        lp.add_row(row, LpRelation::less_equal, h.d_h);
    }
    LpOutcome out = solve_lp(lp);
    if (out.status != LpStatus::optimal) return 0.0;
    return out.objective_value;
}

} // namespace rumdp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rumdp/instance.hpp"
#include "rumdp/regret.hpp"

#include <cmath>

using namespace rumdp;

namespace {

// One self-looping state, two actions, independent rewards in [0,1]^2.
RumdpInstance symmetric_box_instance() {
    Mdp mdp;
    mdp.n_states = 1;
    mdp.n_actions = 2;
    mdp.gamma = 0.9;
    mdp.transition = MatrixXd::Ones(2, 1);
    mdp.alpha = VectorXd::Ones(1);
    MatrixXd a(4, 2);
    a << 1, 0, -1, 0, 0, 1, 0, -1;
    VectorXd b(4);
    b << 1, 0, 1, 0;
    return RumdpInstance{std::move(mdp),
                         RewardPolytope(std::move(a), std::move(b), MatrixXd::Identity(2, 2)),
                         GenConfig{}, false};
}

// Exhaustive lower bound on max regret by sampling a w grid.
double grid_max_regret(const VectorXd& f, const NondominatedSet& gamma,
                       const RewardPolytope& poly, int per_axis) {
    auto [lo, hi] = poly.bounding_box();
    const int d = poly.dim();
    std::vector<int> counter(std::size_t(d), 0);
    double best = -1e100;
    for (;;) {
        VectorXd w(d);
        for (int j = 0; j < d; ++j)
            w(j) = lo(j) + (hi(j) - lo(j)) * counter[std::size_t(j)] / (per_axis - 1.0);
        if (poly.contains(w, 1e-9)) {
            const VectorXd r = poly.to_full_reward(w);
            for (const auto& e : gamma.entries())
                best = std::max(best, r.dot(e.occupancy.f) - r.dot(f));
        }
        int j = 0;
        while (j < d) {
            if (++counter[std::size_t(j)] < per_axis) break;
            counter[std::size_t(j)] = 0;
            ++j;
        }
        if (j == d) break;
    }
    return best;
}

} // namespace

TEST_CASE("max regret on the symmetric box fixture") {
    RumdpInstance inst = symmetric_box_instance();
    auto gamma = brute_force_nondominated(inst.mdp, inst.polytope);
    REQUIRE(gamma.size() == 2);

    // Pure policy a0 has occupancy (10, 0); the adversary plays a1 at (0,1).
    std::size_t a0 = gamma[0].policy.action[0] == 0 ? 0 : 1;
    auto [pair, value] = max_regret(gamma[a0].occupancy.f, gamma, inst.polytope);
    CHECK(value == doctest::Approx(10.0));
    CHECK(pair.r_w(0) == doctest::Approx(0.0));
    CHECK(pair.r_w(1) == doctest::Approx(1.0));

    // Grid samples never beat the LP maximum.
    CHECK(grid_max_regret(gamma[a0].occupancy.f, gamma, inst.polytope, 100) <=
          value + 1e-9);

    // Singleton Gamma: regret of its own policy is zero.
    NondominatedSet solo;
    solo.insert(inst.mdp, gamma[a0]);
    auto [p2, v2] = max_regret(solo[0].occupancy.f, solo, inst.polytope);
    CHECK(v2 == doctest::Approx(0.0));
}

TEST_CASE("xu-mannar and icg-nd solve the analytic fixture") {
    RumdpInstance inst = symmetric_box_instance();
    auto gamma = brute_force_nondominated(inst.mdp, inst.polytope);
    REQUIRE(gamma.size() == 2);

    auto xm = solve_xu_mannor(inst.polytope, gamma);
    CHECK(xm.regret == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(xm.weights(0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(xm.weights(1) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(evaluate_regret(xm.weights, gamma, inst.polytope) ==
          doctest::Approx(xm.regret).epsilon(1e-6));

    auto icg = solve_icg_nd(inst.mdp, inst.polytope, gamma, 1e-7);
    CHECK(icg.converged);
    CHECK(icg.regret == doctest::Approx(5.0).epsilon(1e-5));
    CHECK(evaluate_regret_occupancy(icg.occupancy.f, gamma, inst.polytope) <=
          icg.regret + 1e-6);
}

TEST_CASE("singleton Gamma gives zero regret from both solvers") {
    GenConfig cfg;
    cfg.n_states = 4;
    cfg.n_actions = 1;
    cfg.reward_dim = 2;
    cfg.seed = 3;
    RumdpInstance inst = generate(cfg);
    auto gamma = enumerate_gt(inst.mdp, inst.polytope);
    REQUIRE(gamma.size() == 1);

    auto xm = solve_xu_mannor(inst.polytope, gamma);
    CHECK(std::abs(xm.regret) < 1e-7);
    CHECK(xm.weights(0) == doctest::Approx(1.0));

    auto icg = solve_icg_nd(inst.mdp, inst.polytope, gamma, 1e-6);
    CHECK(std::abs(icg.regret) < 1e-6);
}

TEST_CASE("solvers agree across a small random corpus") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        GenConfig cfg;
        cfg.n_states = 2 + int(seed % 3);
        cfg.n_actions = 2;
        cfg.reward_dim = 1 + int(seed % 3);
        cfg.seed = 400 + seed;
        RumdpInstance inst = generate(cfg);
        auto gamma = enumerate_gt(inst.mdp, inst.polytope);

        auto xm = solve_xu_mannor(inst.polytope, gamma);
        auto icg = solve_icg_nd(inst.mdp, inst.polytope, gamma, 1e-7);
        CHECK(std::abs(xm.regret - icg.regret) < 1e-5);
        CHECK(evaluate_regret(xm.weights, gamma, inst.polytope) ==
              doctest::Approx(xm.regret).epsilon(1e-6));
        CHECK(evaluate_regret_occupancy(icg.occupancy.f, gamma, inst.polytope) <=
              icg.regret + 1e-6);
        // Sandwich against a grid lower bound and the uniform mixture.
        if (inst.polytope.dim() <= 2) {
            VectorXd uniform =
                VectorXd::Constant(int(gamma.size()), 1.0 / double(gamma.size()));
            CHECK(grid_max_regret(xm.occupancy.f, gamma, inst.polytope, 40) <=
                  xm.regret + 1e-8);
            CHECK(xm.regret <=
                  evaluate_regret(uniform, gamma, inst.polytope) + 1e-8);
        }
    }
}

TEST_CASE("icg master value is nondecreasing and mixtures stay valid") {
    GenConfig cfg;
    cfg.n_states = 4;
    cfg.n_actions = 3;
    cfg.reward_dim = 2;
    cfg.seed = 12;
    RumdpInstance inst = generate(cfg);
    auto gamma = enumerate_gt(inst.mdp, inst.polytope);
    auto icg = solve_icg_nd(inst.mdp, inst.polytope, gamma, 1e-7);
    CHECK(icg.converged);
    REQUIRE(icg.delta_history.size() == std::size_t(icg.iterations));
    for (std::size_t i = 1; i < icg.delta_history.size(); ++i)
        CHECK(icg.delta_history[i] >= icg.delta_history[i - 1] - 1e-9);
    // Valid occupancy: nonnegative, correct mass.
    CHECK(icg.occupancy.f.minCoeff() >= -1e-7);
    CHECK(std::abs(icg.occupancy.f.sum() - 1.0 / (1.0 - inst.mdp.gamma)) < 1e-5);

    auto xm = solve_xu_mannor(inst.polytope, gamma);
    CHECK(xm.weights.minCoeff() >= -1e-9);
    CHECK(std::abs(xm.weights.sum() - 1.0) < 1e-8);
    for (auto idx : xm.support) CHECK(xm.weights(int(idx)) > 1e-9);
}

TEST_CASE("subset mixtures underestimate their own full-corpus regret") {
    GenConfig cfg;
    cfg.n_states = 4;
    cfg.n_actions = 3;
    cfg.reward_dim = 2;
    cfg.seed = 21;
    RumdpInstance inst = generate(cfg);
    auto full = enumerate_gt(inst.mdp, inst.polytope);
    REQUIRE(full.size() >= 2);

    NondominatedSet subset;
    for (std::size_t i = 0; i < full.size() / 2 + 1; ++i) subset.insert(inst.mdp, full[i]);
    auto restricted = solve_xu_mannor(inst.polytope, subset);
    const double true_regret =
        evaluate_regret_occupancy(restricted.occupancy.f, full, inst.polytope);
    CHECK(restricted.regret <= true_regret + 1e-7);
}

TEST_CASE("input validation") {
    RumdpInstance inst = symmetric_box_instance();
    NondominatedSet empty;
    CHECK_THROWS_AS(solve_xu_mannor(inst.polytope, empty), RumdpError);
    CHECK_THROWS_AS(max_regret(VectorXd::Zero(2), empty, inst.polytope), RumdpError);
    auto gamma = brute_force_nondominated(inst.mdp, inst.polytope);
    CHECK_THROWS_AS(solve_icg_nd(inst.mdp, inst.polytope, gamma, 0.0), RumdpError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rumdp/lp.hpp"
#include "rumdp/mdp.hpp"

#include <cmath>

using namespace rumdp;

namespace {

// Two states, actions {stay, switch}: stay self-loops, switch flips state.
Mdp two_state_mdp(double gamma = 0.9) {
    Mdp mdp;
    mdp.n_states = 2;
    mdp.n_actions = 2;
    mdp.gamma = gamma;
    mdp.transition = MatrixXd::Zero(4, 2);
    mdp.transition(0, 0) = 1.0;  // (s0, stay) -> s0
    mdp.transition(1, 1) = 1.0;  // (s0, switch) -> s1
    mdp.transition(2, 1) = 1.0;  // (s1, stay) -> s1
    mdp.transition(3, 0) = 1.0;  // (s1, switch) -> s0
    mdp.alpha = VectorXd::Zero(2);
    mdp.alpha(0) = 1.0;
    return mdp;
}

// r(s0, stay) = 1, everything else 0.
VectorXd two_state_reward() {
    VectorXd r = VectorXd::Zero(4);
    r(0) = 1.0;
    return r;
}

Mdp random_mdp(SplitMix64& rng, int n, int m, double gamma) {
    Mdp mdp;
    mdp.n_states = n;
    mdp.n_actions = m;
    mdp.gamma = gamma;
    mdp.transition.resize(n * m, n);
    for (int row = 0; row < n * m; ++row) {
        VectorXd t(n);
        for (int s = 0; s < n; ++s) t(s) = -std::log1p(-rng.uniform01());
        mdp.transition.row(row) = (t / t.sum()).transpose();
    }
    VectorXd a(n);
    for (int s = 0; s < n; ++s) a(s) = -std::log1p(-rng.uniform01());
    mdp.alpha = a / a.sum();
    return mdp;
}

VectorXd random_reward(SplitMix64& rng, int nm) {
    VectorXd r(nm);
    for (int i = 0; i < nm; ++i) r(i) = rng.uniform(-1.0, 1.0);
    return r;
}

DeterministicPolicy random_policy(SplitMix64& rng, int n, int m) {
    DeterministicPolicy pi;
    pi.action.resize(std::size_t(n));
    for (int s = 0; s < n; ++s) pi.action[std::size_t(s)] = int(rng.uniform_int(m));
    return pi;
}

// 10000 applications of the Bellman evaluation operator.
VectorXd bellman_iteration_oracle(const Mdp& mdp, const VectorXd& reward,
                                  const DeterministicPolicy& pi) {
    VectorXd v = VectorXd::Zero(mdp.n_states);
    for (int it = 0; it < 10000; ++it) {
        VectorXd next(mdp.n_states);
        for (int s = 0; s < mdp.n_states; ++s) {
            const int row = mdp.idx(s, pi.action[std::size_t(s)]);
            next(s) = reward(row) + mdp.gamma * mdp.transition.row(row).dot(v);
        }
        v = next;
    }
    return v;
}

} // namespace

TEST_CASE("E matrix entries and row sums") {
    Mdp mdp = two_state_mdp(0.9);
    MatrixXd e = build_e_matrix(mdp);
    // self-loop: T(s,a,s) = 1 -> E = 1 - 1/0.9 = -1/9
    CHECK(e(0, 0) == doctest::Approx(1.0 - 1.0 / 0.9));
    // deterministic switch: off-diagonal 1, diagonal -1/gamma
    CHECK(e(1, 1) == doctest::Approx(1.0));
    CHECK(e(1, 0) == doctest::Approx(-1.0 / 0.9));
    for (int r = 0; r < 4; ++r)
        CHECK(e.row(r).sum() == doctest::Approx(1.0 - 1.0 / 0.9));

    mdp.gamma = 0.0;
    CHECK_THROWS_AS(build_e_matrix(mdp), RumdpError);
}

TEST_CASE("policy evaluation on the two-state fixture") {
    Mdp mdp = two_state_mdp();
    DeterministicPolicy pi{{0, 1}};  // stay in s0, switch in s1
    auto v = evaluate_policy(mdp, two_state_reward(), pi);
    CHECK(v.v(0) == doctest::Approx(10.0));
    CHECK(v.v(1) == doctest::Approx(9.0));

    auto zero = evaluate_policy(mdp, VectorXd::Zero(4), pi);
    CHECK(zero.v.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("policy evaluation matches the iterative oracle") {
    SplitMix64 rng(11);
    Mdp mdp = random_mdp(rng, 5, 3, 0.9);
    VectorXd r = random_reward(rng, 15);
    DeterministicPolicy pi = random_policy(rng, 5, 3);
    VectorXd oracle = bellman_iteration_oracle(mdp, r, pi);
    auto v = evaluate_policy(mdp, r, pi);
    CHECK((v.v - oracle).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("q function substitution and fixed-point identity") {
    Mdp mdp = two_state_mdp();
    DeterministicPolicy pi{{0, 1}};
    VectorXd r = two_state_reward();
    auto v = evaluate_policy(mdp, r, pi);
    auto q = q_function(mdp, r, v);
    CHECK(q.q(mdp.idx(0, 1)) == doctest::Approx(8.1));  // 0 + 0.9 * 9
    for (int s = 0; s < 2; ++s)
        CHECK(std::abs(q.q(mdp.idx(s, pi.action[std::size_t(s)])) - v.v(s)) < 1e-10);

    SplitMix64 rng(21);
    Mdp rnd = random_mdp(rng, 6, 3, 0.95);
    VectorXd rr = random_reward(rng, 18);
    DeterministicPolicy rp = random_policy(rng, 6, 3);
    auto rv = evaluate_policy(rnd, rr, rp);
    // dense recomputation
    for (int s = 0; s < 6; ++s)
        for (int a = 0; a < 3; ++a) {
            double expect = rr(rnd.idx(s, a)) + 0.95 * rnd.transition.row(rnd.idx(s, a)).dot(rv.v);
            CHECK(std::abs(q_function(rnd, rr, rv).q(rnd.idx(s, a)) - expect) < 1e-12);
        }
}

TEST_CASE("solve_optimal on fixtures") {
    Mdp mdp = two_state_mdp();
    auto [pi, v] = solve_optimal(mdp, two_state_reward());
    CHECK(pi.action == std::vector<int>{0, 1});
    CHECK(v.v(0) == doctest::Approx(10.0));
    CHECK(v.v(1) == doctest::Approx(9.0));

    auto [pi0, v0] = solve_optimal(mdp, VectorXd::Zero(4));
    CHECK(pi0.action == std::vector<int>{0, 0});
    CHECK(v0.v.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("solve_optimal matches the dual LP objective") {
    SplitMix64 rng(31);
    Mdp mdp = random_mdp(rng, 5, 3, 0.9);
    VectorXd r = random_reward(rng, 15);
    auto [pi, v] = solve_optimal(mdp, r);

    // Dual LP: max r'f s.t. gamma E'f + alpha = 0, f >= 0.
    MatrixXd e = build_e_matrix(mdp);
    LinearProgram lp(15);
    lp.sense = LpSense::maximize;
    lp.objective = r;
    for (int j = 0; j < 15; ++j) lp.lower(j) = 0.0;
    for (int sp = 0; sp < 5; ++sp)
        lp.add_row(mdp.gamma * e.col(sp), LpRelation::equal, -mdp.alpha(sp));
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(out.objective_value == doctest::Approx(mdp.alpha.dot(v.v)).epsilon(1e-6));

    // The dual optimizer is the optimal policy's occupancy.
    auto f = occupancy_of(mdp, pi);
    CHECK((out.solution - f.f).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("occupancy fixtures") {
    Mdp mdp = two_state_mdp();
    DeterministicPolicy pi{{0, 1}};
    auto f = occupancy_of(mdp, pi);
    CHECK(f.f(0) == doctest::Approx(10.0));
    CHECK(f.f.sum() == doctest::Approx(10.0));

    mdp.alpha << 0.0, 1.0;
    auto f2 = occupancy_of(mdp, pi);
    CHECK(f2.f(mdp.idx(1, 1)) == doctest::Approx(1.0));
    CHECK(f2.f(mdp.idx(0, 0)) == doctest::Approx(9.0));
}

TEST_CASE("policy extraction") {
    Mdp mdp = two_state_mdp();
    DeterministicPolicy pi{{0, 1}};
    auto f = occupancy_of(mdp, pi);
    auto ext = policy_of(mdp, f);
    // alpha = (1,0) and "stay" never leaves s0, so s1 has zero mass and the
    // round trip only holds where mass is positive.
    CHECK(ext.deterministic.action[0] == 0);
    CHECK(ext.deterministic.action[1] == 0);  // zero-mass convention, not pi(s1)=1

    OccupancyFrequency split{VectorXd::Zero(4)};
    split.f(mdp.idx(0, 0)) = 0.4;
    split.f(mdp.idx(0, 1)) = 0.6;
    auto ext2 = policy_of(mdp, split);
    CHECK(ext2.stochastic(0, 0) == doctest::Approx(0.4));
    CHECK(ext2.stochastic(0, 1) == doctest::Approx(0.6));
    CHECK(ext2.deterministic.action[0] == 1);
    CHECK(ext2.deterministic.action[1] == 0);  // zero-mass state convention
}

TEST_CASE("value identity and occupancy validity across random pairs") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + int(rng.uniform_int(4));
        const int m = 2 + int(rng.uniform_int(2));
        Mdp mdp = random_mdp(rng, n, m, 0.8 + 0.15 * rng.uniform01());
        VectorXd r = random_reward(rng, n * m);
        DeterministicPolicy pi = random_policy(rng, n, m);

        auto v = evaluate_policy(mdp, r, pi);
        auto f = occupancy_of(mdp, pi);
        CHECK(std::abs(mdp.alpha.dot(v.v) - value_of_occupancy(r, f)) < 1e-8);

        MatrixXd e = build_e_matrix(mdp);
        CHECK((mdp.gamma * e.transpose() * f.f + mdp.alpha).lpNorm<Eigen::Infinity>() < 1e-8);
        CHECK(f.f.minCoeff() >= -1e-9);
        CHECK(std::abs(f.f.sum() - 1.0 / (1.0 - mdp.gamma)) < 1e-6);

        auto ext = policy_of(mdp, f);
        for (int s = 0; s < n; ++s) {
            double mass = 0.0;
            for (int a = 0; a < m; ++a) mass += f.f(mdp.idx(s, a));
            if (mass > 1e-12)
                CHECK(ext.deterministic.action[std::size_t(s)] == pi.action[std::size_t(s)]);
        }
    }
}

TEST_CASE("Bellman optimality slack of solve_optimal") {
    SplitMix64 rng(88);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + int(rng.uniform_int(5));
        const int m = 2 + int(rng.uniform_int(3));
        Mdp mdp = random_mdp(rng, n, m, 0.9);
        VectorXd r = random_reward(rng, n * m);
        auto [pi, v] = solve_optimal(mdp, r);
        auto q = q_function(mdp, r, v);
        double slack = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n * m; ++i)
            slack = std::max(slack, q.q(i) - v.v(i / m));
        CHECK(slack <= 1e-8);
    }
}

TEST_CASE("solve_optimal invariant under positive reward scaling") {
    SplitMix64 rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        Mdp mdp = random_mdp(rng, 4, 3, 0.9);
        VectorXd r = random_reward(rng, 12);
        const double k = std::exp(rng.uniform(-2.0, 2.0));
        auto [a, va] = solve_optimal(mdp, r);
        auto [b, vb] = solve_optimal(mdp, (k * r).eval());
        CHECK(a == b);
    }
}

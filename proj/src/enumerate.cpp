#include "rumdp/enumerate.hpp"

#include "rumdp/lp.hpp"

#include <chrono>
#include <cmath>
#include <deque>

namespace rumdp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

NondominatedEntry make_entry(const Mdp& mdp, const DeterministicPolicy& policy,
                             const VectorXd& witness_w) {
    return NondominatedEntry{policy, occupancy_of(mdp, policy), witness_w};
}

// Reward optimality regions are cones: r = Phi w makes every boundary
// hyperplane homogeneous, so the optimal-policy set is identical along the
// ray through w. Crossing LPs return points a hair past a boundary, where
// Bellman gaps can sit inside solve_optimal's tie window and the canonical
// argmax collapses differently than in the cone's interior. Solving at the
// largest rescaling of w that stays inside R resolves ties the way the
// interior does. Returns the policy and the rescaled point.
std::pair<DeterministicPolicy, VectorXd> solve_at_generic_scale(const Mdp& mdp,
                                                                const RewardPolytope& polytope,
                                                                const VectorXd& w) {
    double s_max = std::numeric_limits<double>::infinity();
    if (polytope.num_rows() > 0) {
        const VectorXd aw = polytope.a_matrix() * w;
        for (int i = 0; i < polytope.num_rows(); ++i)
            if (aw(i) > 1e-15) s_max = std::min(s_max, polytope.b_vector()(i) / aw(i));
    }
    double scale = 1.0;
    if (std::isfinite(s_max)) scale = std::max(1.0, 0.9 * s_max);
    const VectorXd ws = scale * w;
    auto [policy, value] = solve_optimal(mdp, polytope.to_full_reward(ws));
    return {std::move(policy), ws};
}

// Deterministic seed for the reseeding fallback below; unrelated to any
// user-facing seed so exact enumeration stays parameter-free.
constexpr std::uint64_t kSeedSalt = 0x5EEDFACEULL;

// Picks a starting point whose optimal policy has a full-dimensional region.
// The Chebyshev center of a symmetric polytope sits where all region cones
// meet (w = 0 for centered boxes), so the canonical tie-broken policy there
// is usually optimal on a measure-zero set only; reseed until the region has
// positive width.
std::pair<VectorXd, DeterministicPolicy> pick_seed(const Mdp& mdp,
                                                   const RewardPolytope& polytope,
                                                   double delta, std::int64_t& lp_count) {
    VectorXd w = polytope.interior_point().w;
    ++lp_count;
    SplitMix64 rng(kSeedSalt);
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto [policy, ws] = solve_at_generic_scale(mdp, polytope, w);
        OptRegion region = reward_opt_region(mdp, polytope, ws, policy);
        ++lp_count;
        if (region_width(region, polytope) > std::max(delta, 1e-9))
            return {ws, policy};
        w = polytope.random_interior_point(rng).w;
    }
    throw RumdpError(ErrorKind::degenerate_polytope,
                     "no full-dimensional reward optimality region found");
}

} // namespace

PolicyKey canonical_key(const Mdp& mdp, const DeterministicPolicy& policy,
                        const OccupancyFrequency& occupancy) {
    PolicyKey key;
    key.actions.resize(std::size_t(mdp.n_states));
    for (int s = 0; s < mdp.n_states; ++s) {
        double mass = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a) mass += occupancy.f(mdp.idx(s, a));
        key.actions[std::size_t(s)] =
            mass < 1e-12 ? 0 : std::int32_t(policy.action[std::size_t(s)]);
    }
    return key;
}

bool NondominatedSet::insert(const Mdp& mdp, NondominatedEntry entry) {
    PolicyKey key = canonical_key(mdp, entry.policy, entry.occupancy);
    auto [it, fresh] = index_.emplace(key, entries_.size());
    if (!fresh) return false;
    entries_.push_back(std::move(entry));
    key_list_.push_back(std::move(key));
    return true;
}

// --- Exact geometric traversal ------------------------------------------------

NondominatedSet enumerate_gt(const Mdp& mdp, const RewardPolytope& polytope,
                             const EnumerateOptions& opts) {
    const auto t0 = Clock::now();
    const double delta = opts.delta > 0 ? opts.delta : default_delta(polytope);

    NondominatedSet gamma;
    auto [w0, pi0] = pick_seed(mdp, polytope, delta, gamma.stats.lp_count);
    gamma.insert(mdp, make_entry(mdp, pi0, w0));
    if (opts.progress && !opts.progress(gamma)) {
        gamma.stats.stop_reason = "callback";
        gamma.stats.wall_ms = ms_since(t0);
        return gamma;
    }

    struct AgendaItem {
        VectorXd w;
        DeterministicPolicy policy;
    };
    std::deque<AgendaItem> agenda;
    agenda.push_back({w0, pi0});

    struct Candidate {
        VectorXd w;
        DeterministicPolicy policy;
    };

    auto expand = [&](const AgendaItem& item, std::int64_t& lp_count) {
        std::vector<Candidate> found;
        OptRegion region = reward_opt_region(mdp, polytope, item.w, item.policy);
        for (const auto& h : region.hyperplanes) {
            ++lp_count;
            auto w_adj = adjacent_reward(h, region, polytope, delta);
            if (!w_adj) continue;
            auto [policy, ws] = solve_at_generic_scale(mdp, polytope, *w_adj);
            found.push_back({std::move(ws), std::move(policy)});
        }
        return found;
    };

    bool stopped = false;
    while (!agenda.empty() && !stopped) {
        if (opts.threads <= 1) {
            AgendaItem item = std::move(agenda.front());
            agenda.pop_front();
            ++gamma.stats.regions_visited;
            for (auto& cand : expand(item, gamma.stats.lp_count)) {
                if (!gamma.insert(mdp, make_entry(mdp, cand.policy, cand.w))) continue;
                agenda.push_back({std::move(cand.w), std::move(cand.policy)});
                if (opts.progress && !opts.progress(gamma)) {
                    gamma.stats.stop_reason = "callback";
                    stopped = true;
                    break;
                }
            }
        } else {
            // Wave-parallel BFS: expand the whole frontier concurrently, then
            // merge in deterministic order (first writer wins).
            std::vector<AgendaItem> wave(std::make_move_iterator(agenda.begin()),
                                         std::make_move_iterator(agenda.end()));
            agenda.clear();
            std::vector<std::vector<Candidate>> results(wave.size());
            std::vector<std::int64_t> lp_counts(wave.size(), 0);
            parallel_for(wave.size(), opts.threads, [&](std::size_t i) {
                results[i] = expand(wave[i], lp_counts[i]);
            });
            for (std::size_t i = 0; i < wave.size() && !stopped; ++i) {
                ++gamma.stats.regions_visited;
                gamma.stats.lp_count += lp_counts[i];
                for (auto& cand : results[i]) {
                    if (!gamma.insert(mdp, make_entry(mdp, cand.policy, cand.w))) continue;
                    agenda.push_back({std::move(cand.w), std::move(cand.policy)});
                    if (opts.progress && !opts.progress(gamma)) {
                        gamma.stats.stop_reason = "callback";
                        stopped = true;
                        break;
                    }
                }
            }
        }
    }
    gamma.stats.wall_ms = ms_since(t0);
    return gamma;
}

// --- Approximate geometric traversal ------------------------------------------

NondominatedSet enumerate_approx_gt(const Mdp& mdp, const RewardPolytope& polytope,
                                    const EnumerationBudget& budget, std::uint64_t seed,
                                    const EnumerateOptions& opts) {
    if (!budget.any_finite())
        throw RumdpError(ErrorKind::usage_error,
                         "approximate enumeration needs at least one finite budget cap");
    const auto t0 = Clock::now();
    const double delta = opts.delta > 0 ? opts.delta : default_delta(polytope);
    SplitMix64 rng(seed);

    NondominatedSet gamma;
    gamma.stats.stop_reason = "budget";

    auto over_budget = [&]() {
        if (budget.max_policies >= 0 &&
            std::int64_t(gamma.size()) >= budget.max_policies)
            return true;
        if (budget.max_millis >= 0 && ms_since(t0) > budget.max_millis) return true;
        return false;
    };

    // Inserts a policy found at w; returns false when enumeration must stop.
    auto record = [&](const DeterministicPolicy& policy, const VectorXd& w,
                      bool* added) {
        if (gamma.insert(mdp, make_entry(mdp, policy, w))) {
            if (added) *added = true;
            if (opts.progress && !opts.progress(gamma)) {
                gamma.stats.stop_reason = "callback";
                return false;
            }
        }
        return !over_budget();
    };

    std::int64_t stall = 0;
    std::int64_t lines = 0;
    bool go = budget.max_lines != 0;
    while (go) {
        if (budget.max_lines >= 0 && lines >= budget.max_lines) break;
        if (budget.stall_lines >= 0 && stall >= budget.stall_lines) break;
        if (over_budget()) break;

        const VectorXd start = polytope.random_interior_point(rng).w;
        const VectorXd direction = rng.unit_vector(polytope.dim());
        auto [start_policy, start_ws] = solve_at_generic_scale(mdp, polytope, start);

        bool added = false;
        if (!record(start_policy, start_ws, &added)) break;

        // Walk one side at a time, monotonically in t; the visited-interval
        // guard stops a walk that fails to advance past delta round-off.
        for (int side = 0; side < 2 && go; ++side) {
            const double sign = side == 0 ? 1.0 : -1.0;
            VectorXd cur = start;
            DeterministicPolicy cur_policy = start_policy;
            for (int step = 0; step < 100000; ++step) {
                OptRegion region;
                try {
                    region = reward_opt_region(mdp, polytope, cur, cur_policy);
                } catch (const RumdpError& e) {
                    if (e.kind() == ErrorKind::precondition_violated) break;
                    throw;
                }
                ++gamma.stats.regions_visited;
                auto exits = line_exit_points(region, polytope, cur, direction, delta);
                const VectorXd* next = nullptr;
                double advance = 0.0;
                for (const auto& w : exits) {
                    const double t = (w - cur).dot(direction) * sign;
                    if (t > advance) {
                        advance = t;
                        next = &w;
                    }
                }
                if (!next || advance < delta * 0.5) break;  // left R or stalled
                cur = *next;
                // The walk geometry stays on the line; only the policy and
                // the stored witness come from the rescaled point.
                auto [policy, ws] = solve_at_generic_scale(mdp, polytope, cur);
                cur_policy = std::move(policy);
                if (!record(cur_policy, ws, &added)) {
                    go = false;
                    break;
                }
            }
        }

        ++lines;
        ++gamma.stats.lines_completed;
        stall = added ? 0 : stall + 1;
        if (opts.progress && go && !opts.progress(gamma)) {
            gamma.stats.stop_reason = "callback";
            break;
        }
    }
    gamma.stats.wall_ms = ms_since(t0);
    return gamma;
}

// --- Witness baseline ----------------------------------------------------------

std::optional<VectorXd> find_witness_reward(const Mdp& mdp, const NondominatedEntry& entry,
                                            int s, int a, const NondominatedSet& gamma_set,
                                            const RewardPolytope& polytope,
                                            std::int64_t* lp_counter) {
    if (s < 0 || s >= mdp.n_states || a < 0 || a >= mdp.n_actions)
        throw RumdpError(ErrorKind::shape_mismatch, "state or action index out of range");

    // Local adjustment: play a in s, the entry's action elsewhere.
    DeterministicPolicy adjusted = entry.policy;
    adjusted.action[std::size_t(s)] = a;
    const OccupancyFrequency g = occupancy_of(mdp, adjusted);

    const int d = polytope.dim();
    // Variables (w, eps), both free: maximize eps subject to Aw <= b and
    // (Phi w)'g >= (Phi w)'g' + eps for every g' already collected.
    LinearProgram lp(d + 1);
    lp.sense = LpSense::maximize;
    lp.objective(d) = 1.0;
    for (int i = 0; i < polytope.num_rows(); ++i) {
        VectorXd row(d + 1);
        row.head(d) = polytope.a_matrix().row(i);
        row(d) = 0.0;
        lp.add_row(row, LpRelation::less_equal, polytope.b_vector()(i));
    }
    for (const auto& other : gamma_set.entries()) {
        VectorXd diff = polytope.basis().transpose() * (g.f - other.occupancy.f);
        VectorXd row(d + 1);
        row.head(d) = -diff;
        row(d) = 1.0;
        lp.add_row(row, LpRelation::less_equal, 0.0);
    }
    if (lp_counter) ++*lp_counter;
    LpOutcome out = solve_lp(lp);
    if (out.status != LpStatus::optimal)
        throw RumdpError(ErrorKind::numerical_failure, "witness LP failed");
    if (out.solution(d) <= 1e-8) return std::nullopt;
    return out.solution.head(d);
}

NondominatedSet enumerate_pi_witness(const Mdp& mdp, const RewardPolytope& polytope,
                                     const EnumerateOptions& opts) {
    const auto t0 = Clock::now();
    const double delta = opts.delta > 0 ? opts.delta : default_delta(polytope);

    NondominatedSet gamma;
    auto [w0, pi0] = pick_seed(mdp, polytope, delta, gamma.stats.lp_count);
    gamma.insert(mdp, make_entry(mdp, pi0, w0));
    if (opts.progress && !opts.progress(gamma)) {
        gamma.stats.stop_reason = "callback";
        gamma.stats.wall_ms = ms_since(t0);
        return gamma;
    }

    std::deque<std::size_t> agenda;
    agenda.push_back(0);
    bool stopped = false;
    while (!agenda.empty() && !stopped) {
        const std::size_t item = agenda.front();
        agenda.pop_front();
        ++gamma.stats.regions_visited;
        // Entry snapshot: gamma's storage may reallocate inside the loop.
        const NondominatedEntry base = gamma[item];
        for (int s = 0; s < mdp.n_states && !stopped; ++s) {
            for (int a = 0; a < mdp.n_actions && !stopped; ++a) {
                if (a == base.policy.action[std::size_t(s)]) continue;
                for (;;) {
                    auto w = find_witness_reward(mdp, base, s, a, gamma, polytope,
                                                 &gamma.stats.lp_count);
                    if (!w) break;
                    auto [policy, ws] = solve_at_generic_scale(mdp, polytope, *w);
                    NondominatedEntry fresh = make_entry(mdp, policy, ws);
                    if (!gamma.insert(mdp, std::move(fresh)))
                        break;  // numerically stale witness; avoid spinning
                    agenda.push_back(gamma.size() - 1);
                    if (opts.progress && !opts.progress(gamma)) {
                        gamma.stats.stop_reason = "callback";
                        stopped = true;
                        break;
                    }
                }
            }
        }
    }
    gamma.stats.wall_ms = ms_since(t0);
    return gamma;
}

// --- Brute-force oracle ---------------------------------------------------------

NondominatedSet brute_force_nondominated(const Mdp& mdp, const RewardPolytope& polytope,
                                         double margin) {
    const auto t0 = Clock::now();
    const int n = mdp.n_states, m = mdp.n_actions;
    double count = 1;
    for (int s = 0; s < n; ++s) {
        count *= m;
        if (count > 1e5)
            throw RumdpError(ErrorKind::instance_too_large,
                             "brute force guarded at 1e5 policies");
    }

    // Policies whose projected values Phi'g coincide are indistinguishable
    // for every reward in R; group them and test one representative each.
    struct Class {
        OccupancyFrequency occupancy;
        VectorXd projected;
    };
    std::vector<Class> classes;
    DeterministicPolicy pi;
    pi.action.assign(std::size_t(n), 0);
    for (;;) {
        OccupancyFrequency occ = occupancy_of(mdp, pi);
        VectorXd projected = polytope.basis().transpose() * occ.f;
        bool known = false;
        for (const auto& cls : classes) {
            if ((cls.projected - projected).lpNorm<Eigen::Infinity>() <=
                1e-9 * (1.0 + projected.lpNorm<Eigen::Infinity>())) {
                known = true;
                break;
            }
        }
        if (!known) classes.push_back({std::move(occ), std::move(projected)});

        int s = 0;
        while (s < n) {
            if (++pi.action[std::size_t(s)] < m) break;
            pi.action[std::size_t(s)] = 0;
            ++s;
        }
        if (s == n) break;
    }

    NondominatedSet gamma;
    const int d = polytope.dim();
    for (std::size_t i = 0; i < classes.size(); ++i) {
        LinearProgram lp(d + 1);
        lp.sense = LpSense::maximize;
        lp.objective(d) = 1.0;
        for (int r = 0; r < polytope.num_rows(); ++r) {
            VectorXd row(d + 1);
            row.head(d) = polytope.a_matrix().row(r);
            row(d) = 0.0;
            lp.add_row(row, LpRelation::less_equal, polytope.b_vector()(r));
        }
        for (std::size_t j = 0; j < classes.size(); ++j) {
            if (j == i) continue;
            VectorXd row(d + 1);
            row.head(d) = classes[j].projected - classes[i].projected;
            row(d) = 1.0;
            lp.add_row(row, LpRelation::less_equal, 0.0);
        }
        ++gamma.stats.lp_count;
        LpOutcome out = solve_lp(lp);
        VectorXd w;
        if (out.status == LpStatus::unbounded) {
            // No competitor caps the margin (single occupancy class); the
            // class is trivially nondominated anywhere in R.
            w = polytope.interior_point().w;
        } else if (out.status == LpStatus::optimal) {
            if (out.objective_value <= margin) continue;
            w = out.solution.head(d);
        } else {
            throw RumdpError(ErrorKind::numerical_failure, "nondominance LP infeasible");
        }
        // Re-anchor through the canonical solver at the witness so the key
        // matches what the traversal algorithms produce for this class.
        auto [policy, ws] = solve_at_generic_scale(mdp, polytope, w);
        gamma.insert(mdp, make_entry(mdp, policy, ws));
    }
    gamma.stats.wall_ms = ms_since(t0);
    return gamma;
}

} // namespace rumdp

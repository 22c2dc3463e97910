#pragma once

#include "rumdp/geometry.hpp"
#include "rumdp/mdp.hpp"
#include "rumdp/reward_polytope.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rumdp {

// Canonical membership key: the action tuple after collapsing zero-occupancy
// states to action 0, so policies indistinguishable by occupancy share a key.
struct PolicyKey {
    std::vector<std::int32_t> actions;
    bool operator==(const PolicyKey& o) const { return actions == o.actions; }
};

struct PolicyKeyHash {
    std::size_t operator()(const PolicyKey& k) const {
        std::size_t h = 1469598103934665603ULL;
        for (auto v : k.actions) {
            h ^= std::size_t(std::uint32_t(v));
            h *= 1099511628211ULL;
        }
        return h;
    }
};

PolicyKey canonical_key(const Mdp& mdp, const DeterministicPolicy& policy,
                        const OccupancyFrequency& occupancy);

struct NondominatedEntry {
    DeterministicPolicy policy;   // representative, optimal at witness_w in every state
    OccupancyFrequency occupancy; // the column g_i
    VectorXd witness_w;           // parameter where the policy was found optimal
};

struct EnumStats {
    std::int64_t regions_visited = 0;
    std::int64_t lp_count = 0;
    std::int64_t lines_completed = 0;
    double wall_ms = 0.0;
    std::string stop_reason = "completed";  // completed | budget | callback
};

class NondominatedSet {
  public:
    // Inserts unless the canonical key is already present; first writer wins.
    bool insert(const Mdp& mdp, NondominatedEntry entry);
    bool contains_key(const PolicyKey& key) const { return index_.count(key) != 0; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<NondominatedEntry>& entries() const { return entries_; }
    const NondominatedEntry& operator[](std::size_t i) const { return entries_[i]; }
    const PolicyKey& key_of(std::size_t i) const { return key_list_[i]; }
    const std::vector<PolicyKey>& keys() const { return key_list_; }

    EnumStats stats;

  private:
    std::vector<NondominatedEntry> entries_;
    std::vector<PolicyKey> key_list_;
    std::unordered_map<PolicyKey, std::size_t, PolicyKeyHash> index_;
};

struct EnumerationBudget {
    std::int64_t max_policies = -1;  // -1 = unlimited
    std::int64_t max_lines = -1;     // completed-lines cap (approximate method)
    double max_millis = -1;          // wall-clock cap
    std::int64_t stall_lines = -1;   // stop after this many lines adding nothing

    bool any_finite() const {
        return max_policies >= 0 || max_lines >= 0 || max_millis >= 0 || stall_lines >= 0;
    }
};

// Called after the set changes (and per completed line for the approximate
// method); returning false stops enumeration with stop_reason "callback".
using ProgressCallback = std::function<bool(const NondominatedSet&)>;

struct EnumerateOptions {
    int threads = 1;
    double delta = -1;  // <= 0 selects default_delta(polytope)
    ProgressCallback progress;
};

// Exact geometric traversal: BFS over adjacent reward optimality regions.
NondominatedSet enumerate_gt(const Mdp& mdp, const RewardPolytope& polytope,
                             const EnumerateOptions& opts = {});

// Line-walk approximation: seeded random restarts along straight lines,
// crossing one region boundary at a time. Output keys are a subset of the
// exact traversal's.
NondominatedSet enumerate_approx_gt(const Mdp& mdp, const RewardPolytope& polytope,
                                    const EnumerationBudget& budget, std::uint64_t seed,
                                    const EnumerateOptions& opts = {});

// Witness-style baseline: agenda of policies, repeatedly asking for a reward
// under which a one-action adjustment beats everything collected so far.
NondominatedSet enumerate_pi_witness(const Mdp& mdp, const RewardPolytope& polytope,
                                     const EnumerateOptions& opts = {});

// The witness LP: maximize the margin eps by which the (s,a)-adjusted
// occupancy of `entry` beats every member of gamma_set somewhere in R.
// Returns the parameter vector when eps > 1e-8, nullopt otherwise.
std::optional<VectorXd> find_witness_reward(const Mdp& mdp, const NondominatedEntry& entry,
                                            int s, int a, const NondominatedSet& gamma_set,
                                            const RewardPolytope& polytope,
                                            std::int64_t* lp_counter = nullptr);

// Exhaustive oracle over all m^n deterministic policies (guarded at 1e5):
// keeps an occupancy class iff it beats every other class by margin
// somewhere in R. Entries are re-anchored through solve_optimal at the
// witness so keys match the traversal algorithms'.
NondominatedSet brute_force_nondominated(const Mdp& mdp, const RewardPolytope& polytope,
                                         double margin = 1e-8);

} // namespace rumdp

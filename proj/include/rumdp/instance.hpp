#pragma once

#include "rumdp/mdp.hpp"
#include "rumdp/reward_polytope.hpp"

#include <cstdint>
#include <string>

namespace rumdp {

enum class AlphaMode { uniform, point_mass };
enum class PolytopeMode { box, random_halfspaces };

struct GenConfig {
    int n_states = 0;
    int n_actions = 0;
    int reward_dim = 1;
    double gamma = 0.95;
    std::uint64_t seed = 0;
    int transition_support = 0;  // 0 selects min(n_states, 4)
    AlphaMode alpha_mode = AlphaMode::uniform;
    PolytopeMode polytope_mode = PolytopeMode::box;
    double box_halfwidth = 1.0;

    void validate() const;
};

struct RumdpInstance {
    Mdp mdp;
    RewardPolytope polytope;
    GenConfig meta;       // configuration echo; seed recorded here
    bool has_meta = false;

    // MDP stochasticity invariants (row sums, alpha, gamma range); the
    // polytope is already validated when an instance is loaded or generated.
    void validate_semantics() const { mdp.validate(); }
};

// Seeded random instance: sparse Dirichlet transitions over a uniformly
// chosen successor support, a column-orthonormalized random basis, and a box
// (optionally box plus random halfspaces) parameter polytope. Fully
// determined by the seed.
RumdpInstance generate(const GenConfig& config);

// JSON round trip; lossless for doubles. Throws malformed_file with a field
// diagnostic, or version_mismatch.
void save(const RumdpInstance& instance, const std::string& path);
RumdpInstance load(const std::string& path);

std::string to_json_string(const RumdpInstance& instance);
RumdpInstance from_json_string(const std::string& text);

} // namespace rumdp

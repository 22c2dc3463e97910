#pragma once

#include "rumdp/enumerate.hpp"
#include "rumdp/instance.hpp"
#include "rumdp/regret.hpp"

#include <string>

namespace rumdp {

// Gamma dump: entries with key, witness parameter, and occupancy column,
// plus deterministic stats (wall time is deliberately not serialized so
// fixed-seed reruns are byte-identical).
std::string gamma_dump_to_json(const NondominatedSet& set, const std::string& method,
                               std::uint64_t seed);
void save_gamma_dump(const NondominatedSet& set, const std::string& method,
                     std::uint64_t seed, const std::string& path);

// Reconstructs a set from a dump; occupancies and witnesses are taken from
// the file, keys from the stored action arrays.
NondominatedSet load_gamma_dump(const Mdp& mdp, const std::string& path);

// Regret report: {regret, mixture, occupancy, iterations, lp_count, wall_ms}.
std::string regret_report_to_json(const RegretSolution& solution,
                                  const NondominatedSet& gamma_set,
                                  const std::string& method);
void save_regret_report(const RegretSolution& solution, const NondominatedSet& gamma_set,
                        const std::string& method, const std::string& path);

} // namespace rumdp

#include "rumdp/reports.hpp"

#include <fstream>

#include <json.hpp>

namespace rumdp {

using nlohmann::json;

std::string gamma_dump_to_json(const NondominatedSet& set, const std::string& method,
                               std::uint64_t seed) {
    json entries = json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& e = set[i];
        const auto& key = set.key_of(i);
        entries.push_back(
            json{{"key", key.actions},
                 {"witness_w", std::vector<double>(e.witness_w.data(),
                                                   e.witness_w.data() + e.witness_w.size())},
                 {"occupancy", std::vector<double>(e.occupancy.f.data(),
                                                   e.occupancy.f.data() + e.occupancy.f.size())}});
    }
    json j{{"format_version", 1},
           {"entries", std::move(entries)},
           {"stats",
            json{{"method", method},
                 {"seed", seed},
                 {"regions_visited", set.stats.regions_visited},
                 {"lp_count", set.stats.lp_count},
                 {"lines_completed", set.stats.lines_completed},
                 {"stop_reason", set.stats.stop_reason}}}};
    return j.dump(2) + "\n";
}

void save_gamma_dump(const NondominatedSet& set, const std::string& method,
                     std::uint64_t seed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RumdpError(ErrorKind::malformed_file, "cannot open " + path);
    out << gamma_dump_to_json(set, method, seed);
    if (!out) throw RumdpError(ErrorKind::malformed_file, "write failed: " + path);
}

NondominatedSet load_gamma_dump(const Mdp& mdp, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RumdpError(ErrorKind::malformed_file, "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw RumdpError(ErrorKind::malformed_file,
                         std::string("malformed gamma dump: ") + e.what());
    }
    try {
        NondominatedSet set;
        for (const auto& item : j.at("entries")) {
            NondominatedEntry entry;
            const auto& key = item.at("key");
            entry.policy.action.assign(key.begin(), key.end());
            if (int(entry.policy.action.size()) != mdp.n_states)
                throw RumdpError(ErrorKind::malformed_file,
                                 "gamma dump key length != n_states");
            const auto& occ = item.at("occupancy");
            if (int(occ.size()) != mdp.num_sa())
                throw RumdpError(ErrorKind::malformed_file,
                                 "gamma dump occupancy length != |S||A|");
            entry.occupancy.f.resize(mdp.num_sa());
            for (int i = 0; i < mdp.num_sa(); ++i)
                entry.occupancy.f(i) = occ[std::size_t(i)].get<double>();
            const auto& w = item.at("witness_w");
            entry.witness_w.resize(int(w.size()));
            for (std::size_t i = 0; i < w.size(); ++i)
                entry.witness_w(int(i)) = w[i].get<double>();
            set.insert(mdp, std::move(entry));
        }
        return set;
    } catch (const json::exception& e) {
        throw RumdpError(ErrorKind::malformed_file,
                         std::string("malformed gamma dump: ") + e.what());
    }
}

std::string regret_report_to_json(const RegretSolution& solution,
                                  const NondominatedSet& gamma_set,
                                  const std::string& method) {
    json mixture = json::array();
    if (solution.weights.size()) {
        for (std::size_t i = 0; i < gamma_set.size(); ++i) {
            mixture.push_back(json{{"key", gamma_set.key_of(i).actions},
                                   {"weight", solution.weights(int(i))}});
        }
    }
    json j{{"format_version", 1},
           {"method", method},
           {"regret", solution.regret},
           {"mixture", std::move(mixture)},
           {"occupancy",
            std::vector<double>(solution.occupancy.f.data(),
                                solution.occupancy.f.data() + solution.occupancy.f.size())},
           {"iterations", solution.iterations},
           {"lp_count", solution.lp_count},
           {"wall_ms", solution.wall_ms},
           {"converged", solution.converged}};
    return j.dump(2) + "\n";
}

void save_regret_report(const RegretSolution& solution, const NondominatedSet& gamma_set,
                        const std::string& method, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RumdpError(ErrorKind::malformed_file, "cannot open " + path);
    out << regret_report_to_json(solution, gamma_set, method);
    if (!out) throw RumdpError(ErrorKind::malformed_file, "write failed: " + path);
}

} // namespace rumdp

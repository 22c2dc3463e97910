#include "rumdp/instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace rumdp {

using nlohmann::json;

void GenConfig::validate() const {
    if (n_states < 1 || n_actions < 1)
        throw RumdpError(ErrorKind::usage_error, "need at least one state and action");
    if (reward_dim < 1)
        throw RumdpError(ErrorKind::usage_error, "reward_dim must be >= 1");
    if (reward_dim > n_states * n_actions)
        throw RumdpError(ErrorKind::usage_error, "reward_dim exceeds |S||A|");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw RumdpError(ErrorKind::invalid_discount, "gamma must lie in [0, 1)");
    if (transition_support < 0 || transition_support > n_states)
        throw RumdpError(ErrorKind::usage_error, "transition_support out of range");
    if (box_halfwidth <= 0.0)
        throw RumdpError(ErrorKind::usage_error, "box_halfwidth must be positive");
}

RumdpInstance generate(const GenConfig& config) {
    config.validate();
    const int n = config.n_states, m = config.n_actions, d = config.reward_dim;
    const int support =
        config.transition_support > 0 ? config.transition_support : std::min(n, 4);
    SplitMix64 rng(config.seed);

    // Transitions: per (s,a) pick `support` distinct successors uniformly,
    // weighted by a symmetric unit Dirichlet draw.
    MatrixXd transition = MatrixXd::Zero(n * m, n);
    std::vector<int> successors(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < m; ++a) {
            std::iota(successors.begin(), successors.end(), 0);
            for (int i = 0; i < support; ++i) {
                const int j = i + int(rng.uniform_int(std::uint64_t(n - i)));
                std::swap(successors[std::size_t(i)], successors[std::size_t(j)]);
            }
            const VectorXd weights = rng.dirichlet(support);
            for (int i = 0; i < support; ++i)
                transition(s * m + a, successors[std::size_t(i)]) = weights(i);
        }
    }

    VectorXd alpha(n);
    if (config.alpha_mode == AlphaMode::uniform) {
        alpha.setConstant(1.0 / n);
    } else {
        alpha.setZero();
        alpha(0) = 1.0;
    }

    // Basis: random columns in [-1,1]^{nm}, column-orthonormalized.
    MatrixXd basis(n * m, d);
    for (int j = 0; j < d; ++j) {
        for (;;) {
            VectorXd col(n * m);
            for (int i = 0; i < n * m; ++i) col(i) = rng.uniform(-1.0, 1.0);
            for (int l = 0; l < j; ++l) col -= basis.col(l).dot(col) * basis.col(l);
            const double norm = col.norm();
            if (norm > 1e-8) {
                basis.col(j) = col / norm;
                break;
            }
        }
    }

    // Polytope rows: the box, plus random supporting halfspaces on request.
    int extra = config.polytope_mode == PolytopeMode::random_halfspaces ? 2 * d : 0;
    MatrixXd a_matrix = MatrixXd::Zero(2 * d + extra, d);
    VectorXd b_vector(2 * d + extra);
    for (int j = 0; j < d; ++j) {
        a_matrix(2 * j, j) = 1.0;
        b_vector(2 * j) = config.box_halfwidth;
        a_matrix(2 * j + 1, j) = -1.0;
        b_vector(2 * j + 1) = config.box_halfwidth;
    }
    for (int i = 0; i < extra; ++i) {
        a_matrix.row(2 * d + i) = rng.unit_vector(d).transpose();
        b_vector(2 * d + i) = config.box_halfwidth * rng.uniform(0.5, 1.0);
    }

    RumdpInstance inst{Mdp{n, m, std::move(transition), std::move(alpha), config.gamma},
                       RewardPolytope(std::move(a_matrix), std::move(b_vector),
                                      std::move(basis)),
                       config, true};
    inst.mdp.validate();
    inst.polytope.validate(true);
    return inst;
}

namespace {

json config_to_json(const GenConfig& c) {
    return json{{"n_states", c.n_states},
                {"n_actions", c.n_actions},
                {"reward_dim", c.reward_dim},
                {"gamma", c.gamma},
                {"seed", c.seed},
                {"transition_support", c.transition_support},
                {"alpha_mode", c.alpha_mode == AlphaMode::uniform ? "uniform" : "point-mass"},
                {"polytope_mode",
                 c.polytope_mode == PolytopeMode::box ? "box" : "random-halfspaces"},
                {"box_halfwidth", c.box_halfwidth},
                {"format_version", 1}};
}

GenConfig config_from_json(const json& j) {
    GenConfig c;
    c.n_states = j.value("n_states", 0);
    c.n_actions = j.value("n_actions", 0);
    c.reward_dim = j.value("reward_dim", 1);
    c.gamma = j.value("gamma", 0.95);
    c.seed = j.value("seed", std::uint64_t(0));
    c.transition_support = j.value("transition_support", 0);
    c.alpha_mode =
        j.value("alpha_mode", "uniform") == std::string("point-mass") ? AlphaMode::point_mass
                                                                      : AlphaMode::uniform;
    c.polytope_mode = j.value("polytope_mode", "box") == std::string("random-halfspaces")
                          ? PolytopeMode::random_halfspaces
                          : PolytopeMode::box;
    c.box_halfwidth = j.value("box_halfwidth", 1.0);
    return c;
}

[[noreturn]] void malformed(const std::string& detail) {
    throw RumdpError(ErrorKind::malformed_file, "malformed instance file: " + detail);
}

} // namespace

std::string to_json_string(const RumdpInstance& instance) {
    const Mdp& mdp = instance.mdp;
    const RewardPolytope& poly = instance.polytope;
    const int n = mdp.n_states, m = mdp.n_actions, d = poly.dim();

    json j;
    j["format_version"] = 1;
    j["n_states"] = n;
    j["n_actions"] = m;
    j["gamma"] = mdp.gamma;
    j["alpha"] = std::vector<double>(mdp.alpha.data(), mdp.alpha.data() + n);

    json transitions = json::array();
    for (int s = 0; s < n; ++s) {
        json per_action = json::array();
        for (int a = 0; a < m; ++a) {
            json row = json::array();
            for (int sp = 0; sp < n; ++sp) row.push_back(mdp.transition(mdp.idx(s, a), sp));
            per_action.push_back(std::move(row));
        }
        transitions.push_back(std::move(per_action));
    }
    j["transitions"] = std::move(transitions);

    j["reward_dim"] = d;
    const bool identity_basis =
        d == n * m && poly.basis().isIdentity(0.0);
    if (!identity_basis) {
        json basis = json::array();
        for (int s = 0; s < n; ++s) {
            json per_action = json::array();
            for (int a = 0; a < m; ++a) {
                json row = json::array();
                for (int c = 0; c < d; ++c) row.push_back(poly.basis()(mdp.idx(s, a), c));
                per_action.push_back(std::move(row));
            }
            basis.push_back(std::move(per_action));
        }
        j["basis"] = std::move(basis);
    }

    json a_rows = json::array();
    for (int r = 0; r < poly.num_rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < d; ++c) row.push_back(poly.a_matrix()(r, c));
        a_rows.push_back(std::move(row));
    }
    j["constraints"] = json{{"a", std::move(a_rows)},
                            {"b", std::vector<double>(poly.b_vector().data(),
                                                      poly.b_vector().data() +
                                                          poly.num_rows())}};
    if (instance.has_meta) j["meta"] = config_to_json(instance.meta);
    return j.dump(2) + "\n";
}

RumdpInstance from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    try {
        if (!j.contains("format_version")) malformed("missing format_version");
        if (j["format_version"].get<int>() != 1)
            throw RumdpError(ErrorKind::version_mismatch,
                             "unsupported instance format_version " +
                                 j["format_version"].dump());
        for (const char* field : {"n_states", "n_actions", "gamma", "alpha",
                                  "transitions", "reward_dim", "constraints"})
            if (!j.contains(field)) malformed(std::string("missing field ") + field);

        const int n = j["n_states"].get<int>();
        const int m = j["n_actions"].get<int>();
        const int d = j["reward_dim"].get<int>();
        if (n < 1 || m < 1 || d < 1) malformed("non-positive dimensions");

        Mdp mdp;
        mdp.n_states = n;
        mdp.n_actions = m;
        mdp.gamma = j["gamma"].get<double>();
        if (j["alpha"].size() != std::size_t(n)) malformed("alpha length");
        mdp.alpha.resize(n);
        for (int s = 0; s < n; ++s) mdp.alpha(s) = j["alpha"][std::size_t(s)].get<double>();

        if (j["transitions"].size() != std::size_t(n)) malformed("transitions outer length");
        mdp.transition.resize(n * m, n);
        for (int s = 0; s < n; ++s) {
            const auto& per_action = j["transitions"][std::size_t(s)];
            if (per_action.size() != std::size_t(m))
                malformed("transitions[" + std::to_string(s) + "] length");
            for (int a = 0; a < m; ++a) {
                const auto& row = per_action[std::size_t(a)];
                if (row.size() != std::size_t(n))
                    malformed("transitions[" + std::to_string(s) + "][" +
                              std::to_string(a) + "] length");
                for (int sp = 0; sp < n; ++sp)
                    mdp.transition(mdp.idx(s, a), sp) = row[std::size_t(sp)].get<double>();
            }
        }

        MatrixXd basis;
        if (j.contains("basis")) {
            basis.resize(n * m, d);
            if (j["basis"].size() != std::size_t(n)) malformed("basis outer length");
            for (int s = 0; s < n; ++s) {
                const auto& per_action = j["basis"][std::size_t(s)];
                if (per_action.size() != std::size_t(m)) malformed("basis row group length");
                for (int a = 0; a < m; ++a) {
                    const auto& row = per_action[std::size_t(a)];
                    if (row.size() != std::size_t(d)) malformed("basis row length");
                    for (int c = 0; c < d; ++c)
                        basis(mdp.idx(s, a), c) = row[std::size_t(c)].get<double>();
                }
            }
        } else {
            if (d != n * m) malformed("omitted basis requires reward_dim = |S||A|");
            basis = MatrixXd::Identity(n * m, n * m);
        }

        const auto& cons = j["constraints"];
        if (!cons.contains("a") || !cons.contains("b")) malformed("constraints need a and b");
        const std::size_t rows = cons["a"].size();
        if (cons["b"].size() != rows) malformed("constraint rhs length");
        MatrixXd a_matrix(static_cast<int>(rows), d);
        VectorXd b_vector(static_cast<int>(rows));
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& row = cons["a"][r];
            if (row.size() != std::size_t(d)) malformed("constraint row length");
            for (int c = 0; c < d; ++c) a_matrix(int(r), c) = row[std::size_t(c)].get<double>();
            b_vector(int(r)) = cons["b"][r].get<double>();
        }

        RumdpInstance inst{std::move(mdp),
                           RewardPolytope(std::move(a_matrix), std::move(b_vector),
                                          std::move(basis)),
                           GenConfig{}, false};
        if (j.contains("meta")) {
            inst.meta = config_from_json(j["meta"]);
            inst.has_meta = true;
        }
        // The polytope is validated here (nonempty, bounded, interior); MDP
        // stochasticity is left to validate_semantics so the verify command
        // can report it as a check outcome rather than a load failure.
        inst.polytope.validate(true);
        return inst;
    } catch (const json::exception& e) {
        malformed(e.what());
    }
}

void save(const RumdpInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RumdpError(ErrorKind::malformed_file, "cannot open " + path + " for writing");
    out << to_json_string(instance);
    if (!out) throw RumdpError(ErrorKind::malformed_file, "write failed: " + path);
}

RumdpInstance load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RumdpError(ErrorKind::malformed_file, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

} // namespace rumdp

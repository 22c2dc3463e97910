// Command-line front end: generate instances, enumerate nondominated
// policies, solve minimax regret, verify against oracles, and run benchmarks.
//
// Exit codes: 0 success, 1 runtime/solver failure, 2 usage error,
// 3 verification failure.

#include "rumdp/enumerate.hpp"
#include "rumdp/instance.hpp"
#include "rumdp/regret.hpp"
#include "rumdp/reports.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace rumdp;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

GenConfig config_from_flags(int states, int actions, int reward_dim, double gamma,
                            std::uint64_t seed, int support, const std::string& alpha_mode,
                            const std::string& polytope_mode, double halfwidth) {
    GenConfig cfg;
    cfg.n_states = states;
    cfg.n_actions = actions;
    cfg.reward_dim = reward_dim;
    cfg.gamma = gamma;
    cfg.seed = seed;
    cfg.transition_support = support;
    cfg.box_halfwidth = halfwidth;
    if (alpha_mode == "uniform") cfg.alpha_mode = AlphaMode::uniform;
    else if (alpha_mode == "point-mass") cfg.alpha_mode = AlphaMode::point_mass;
    else throw RumdpError(ErrorKind::usage_error, "unknown --alpha-mode " + alpha_mode);
    if (polytope_mode == "box") cfg.polytope_mode = PolytopeMode::box;
    else if (polytope_mode == "random-halfspaces")
        cfg.polytope_mode = PolytopeMode::random_halfspaces;
    else throw RumdpError(ErrorKind::usage_error, "unknown --polytope-mode " + polytope_mode);
    return cfg;
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(int states, int actions, int reward_dim, double gamma,
                 std::uint64_t seed, int count, int support, const std::string& alpha_mode,
                 const std::string& polytope_mode, double halfwidth,
                 const std::string& output, int threads) {
    GenConfig cfg = config_from_flags(states, actions, reward_dim, gamma, seed, support,
                                      alpha_mode, polytope_mode, halfwidth);
    if (count < 1) throw RumdpError(ErrorKind::usage_error, "--count must be >= 1");
    if (count == 1) {
        save(generate(cfg), output);
        std::cout << output << "\n";
        return kExitOk;
    }
    fs::create_directories(output);
    std::vector<std::string> paths(static_cast<std::size_t>(count), std::string{});
    parallel_for(std::size_t(count), threads, [&](std::size_t i) {
        GenConfig c = cfg;
        c.seed = seed + std::uint64_t(i);
        const fs::path path =
            fs::path(output) / ("instance_" + std::to_string(c.seed) + ".json");
        save(generate(c), path.string());
        paths[i] = path.string();
    });
    for (const auto& p : paths) std::cout << p << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// enumerate

int cmd_enumerate(const std::string& instance_path, const std::string& method,
                  const std::string& output, std::int64_t max_lines,
                  std::int64_t stall_lines, double max_ms, std::int64_t max_policies,
                  std::uint64_t seed, int threads, double delta) {
    RumdpInstance inst = load(instance_path);
    inst.validate_semantics();
    EnumerateOptions opts;
    opts.threads = threads;
    opts.delta = delta;

    NondominatedSet gamma;
    if (method == "gt") {
        gamma = enumerate_gt(inst.mdp, inst.polytope, opts);
    } else if (method == "pi-witness") {
        gamma = enumerate_pi_witness(inst.mdp, inst.polytope, opts);
    } else if (method == "approx-gt") {
        EnumerationBudget budget;
        budget.max_lines = max_lines;
        budget.stall_lines = stall_lines;
        budget.max_millis = max_ms;
        budget.max_policies = max_policies;
        if (!budget.any_finite()) budget.stall_lines = 50;  // documented default
        gamma = enumerate_approx_gt(inst.mdp, inst.polytope, budget, seed, opts);
    } else {
        throw RumdpError(ErrorKind::usage_error, "unknown --method " + method);
    }
    save_gamma_dump(gamma, method, seed, output);
    std::cout << "gamma_size " << gamma.size() << "\n"
              << "wall_ms " << gamma.stats.wall_ms << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// regret

int cmd_regret(const std::string& instance_path, const std::string& gamma_path,
               const std::string& method, double tol, const std::string& output,
               int threads) {
    if (tol <= 0) throw RumdpError(ErrorKind::usage_error, "--tol must be positive");
    RumdpInstance inst = load(instance_path);
    inst.validate_semantics();
    NondominatedSet gamma = load_gamma_dump(inst.mdp, gamma_path);
    if (gamma.size() == 0)
        throw RumdpError(ErrorKind::usage_error, "gamma dump has no entries");

    RegretSolution sol;
    if (method == "icg-nd")
        sol = solve_icg_nd(inst.mdp, inst.polytope, gamma, tol, 10000, threads);
    else if (method == "xu-mannor") sol = solve_xu_mannor(inst.polytope, gamma);
    else throw RumdpError(ErrorKind::usage_error, "unknown --method " + method);

    save_regret_report(sol, gamma, method, output);
    std::cout << "regret " << sol.regret << "\n"
              << "iterations " << sol.iterations << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
    std::string name;
    bool passed = true;
    bool skipped = false;
    std::string detail;
};

int cmd_verify(const std::string& instance_path, const std::string& checks_csv,
               std::uint64_t seed, int trials) {
    RumdpInstance inst = load(instance_path);
    std::set<std::string> want;
    {
        std::stringstream ss(checks_csv);
        std::string item;
        while (std::getline(ss, item, ',')) want.insert(item);
    }
    const bool all = want.count("all") != 0;
    auto wanted = [&](const std::string& name) { return all || want.count(name) != 0; };
    for (const auto& name : want)
        if (name != "all" && name != "validate" && name != "eq4" && name != "occupancy" &&
            name != "bellman" && name != "region" && name != "enum")
            throw RumdpError(ErrorKind::usage_error, "unknown check " + name);

    const Mdp& mdp = inst.mdp;
    const RewardPolytope& poly = inst.polytope;
    const int n = mdp.n_states, m = mdp.n_actions;
    SplitMix64 rng(seed);
    std::vector<CheckResult> results;

    auto run = [&](const std::string& name, auto&& body) {
        if (!wanted(name)) return;
        CheckResult res;
        res.name = name;
        try {
            body(res);
        } catch (const RumdpError& e) {
            if (e.kind() == ErrorKind::usage_error || e.kind() == ErrorKind::instance_too_large)
                throw;
            res.passed = false;
            res.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
        }
        results.push_back(std::move(res));
    };

    run("validate", [&](CheckResult& res) {
        try {
            inst.validate_semantics();
            poly.validate(true);
            res.detail = "mdp and polytope invariants hold";
        } catch (const RumdpError& e) {
            res.passed = false;
            res.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
        }
    });

    run("eq4", [&](CheckResult& res) {
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            DeterministicPolicy pi;
            pi.action.resize(std::size_t(n));
            for (int s = 0; s < n; ++s) pi.action[std::size_t(s)] = int(rng.uniform_int(m));
            const VectorXd r = poly.to_full_reward(poly.random_interior_point(rng).w);
            const auto v = evaluate_policy(mdp, r, pi);
            const auto f = occupancy_of(mdp, pi);
            worst = std::max(worst, std::abs(mdp.alpha.dot(v.v) - value_of_occupancy(r, f)));
        }
        res.passed = worst < 1e-8;
        res.detail = "max |a'V - r'f| = " + std::to_string(worst);
    });

    run("occupancy", [&](CheckResult& res) {
        const MatrixXd e = build_e_matrix(mdp);
        double worst = 0.0, neg = 0.0;
        for (int t = 0; t < trials; ++t) {
            DeterministicPolicy pi;
            pi.action.resize(std::size_t(n));
            for (int s = 0; s < n; ++s) pi.action[std::size_t(s)] = int(rng.uniform_int(m));
            const auto f = occupancy_of(mdp, pi);
            worst = std::max(worst,
                             (mdp.gamma * e.transpose() * f.f + mdp.alpha)
                                 .lpNorm<Eigen::Infinity>());
            neg = std::min(neg, f.f.minCoeff());
        }
        res.passed = worst < 1e-7 && neg > -1e-9;
        res.detail = "max validity residual = " + std::to_string(worst);
    });

    run("bellman", [&](CheckResult& res) {
        double worst = -1e300;
        for (int t = 0; t < trials; ++t) {
            const VectorXd r = poly.to_full_reward(poly.random_interior_point(rng).w);
            auto [pi, v] = solve_optimal(mdp, r);
            const auto q = q_function(mdp, r, v);
            for (int s = 0; s < n; ++s)
                for (int a = 0; a < m; ++a)
                    worst = std::max(worst, q.q(mdp.idx(s, a)) - v.v(s));
        }
        res.passed = worst <= 1e-8;
        res.detail = "max Bellman slack = " + std::to_string(worst);
    });

    run("region", [&](CheckResult& res) {
        const VectorXd w0 = poly.random_interior_point(rng).w;
        auto [pi, v0] = solve_optimal(mdp, poly.to_full_reward(w0));
        const OptRegion region = reward_opt_region(mdp, poly, w0, pi);
        int checked = 0;
        for (int t = 0; t < 40 * trials && checked < trials; ++t) {
            const VectorXd x = poly.random_interior_point(rng).w;
            bool inside = true;
            for (const auto& h : region.hyperplanes)
                if (h.c.dot(x) > h.d_h - 1e-9) { inside = false; break; }
            if (!inside) continue;
            ++checked;
            auto [pi2, v2] = solve_optimal(mdp, poly.to_full_reward(x));
            const auto mine = evaluate_policy(mdp, poly.to_full_reward(x), pi);
            if (mdp.alpha.dot(mine.v) < mdp.alpha.dot(v2.v) - 1e-8) {
                res.passed = false;
                res.detail = "interior sample re-solved to a better policy";
                return;
            }
        }
        res.detail = "region sampling sound (" + std::to_string(checked) + " samples)";
    });

    run("enum", [&](CheckResult& res) {
        double count = 1;
        for (int s = 0; s < n; ++s) {
            count *= m;
            if (count > 1e5) break;
        }
        if (count > 1e5) {
            if (!all)
                throw RumdpError(ErrorKind::instance_too_large,
                                 "enum check needs |A|^|S| <= 1e5");
            res.skipped = true;
            res.detail = "skipped: |A|^|S| > 1e5";
            return;
        }
        auto brute = brute_force_nondominated(mdp, poly);
        auto gt = enumerate_gt(mdp, poly);
        auto wit = enumerate_pi_witness(mdp, poly);
        auto keys = [](const NondominatedSet& s) {
            std::set<std::vector<std::int32_t>> out;
            for (const auto& k : s.keys()) out.insert(k.actions);
            return out;
        };
        const auto kb = keys(brute), kg = keys(gt), kw = keys(wit);
        res.passed = kb == kg && kb == kw;
        res.detail = "|brute|=" + std::to_string(kb.size()) +
                     " |gt|=" + std::to_string(kg.size()) +
                     " |pi-witness|=" + std::to_string(kw.size());
    });

    std::string first_failure;
    for (const auto& res : results) {
        const char* tag = res.skipped ? "skip" : res.passed ? " ok " : "FAIL";
        std::cout << "[" << tag << "] " << res.name << ": " << res.detail << "\n";
        if (!res.passed && first_failure.empty()) first_failure = res.name;
    }
    if (!first_failure.empty()) {
        std::cout << "verification failed at check: " << first_failure << "\n";
        return kExitVerification;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchRecord {
    std::string instance_id;
    int n = 0, m = 0, d = 0;
    double gamma = 0.0;
    std::string method;
    std::size_t gamma_size = 0;
    double wall_ms = 0.0;
    std::optional<double> mmr;
    std::optional<double> rel_error;
    std::int64_t lp_count = 0;
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string csv_line(const BenchRecord& r, bool no_timing) {
    std::ostringstream out;
    char wall[64];
    std::snprintf(wall, sizeof(wall), "%.3f", no_timing ? 0.0 : r.wall_ms);
    out << r.instance_id << ',' << r.n << ',' << r.m << ',' << r.d << ','
        << format_double(r.gamma) << ',' << r.method << ',' << r.gamma_size << ',' << wall
        << ',' << (r.mmr ? format_double(*r.mmr) : "") << ','
        << (r.rel_error ? format_double(*r.rel_error) : "") << ',' << r.lp_count;
    return out.str();
}

// Anytime driver: runs the approximate enumerator with the instrumentation
// clock paused during error evaluation, recording the first crossing of each
// threshold.
struct AnytimeRow {
    double threshold;
    bool met = false;
    double algo_ms = 0.0;
    std::size_t subset = 0;
    double rel_error = 0.0;
    double achieved_regret = 0.0;
};

std::vector<AnytimeRow> run_anytime_approx(const RumdpInstance& inst,
                                           const NondominatedSet& full,
                                           double exact_regret,
                                           const std::vector<double>& thresholds,
                                           double timeout_ms, std::uint64_t seed,
                                           std::int64_t* lp_count,
                                           std::size_t* final_size) {
    std::vector<AnytimeRow> rows;
    rows.reserve(thresholds.size());
    for (double t : thresholds) rows.push_back(AnytimeRow{t});

    const auto t0 = Clock::now();
    double paused_ms = 0.0;
    std::size_t last_size = 0;
    auto remaining = [&] {
        return std::count_if(rows.begin(), rows.end(),
                             [](const AnytimeRow& r) { return !r.met; });
    };

    EnumerateOptions opts;
    opts.progress = [&](const NondominatedSet& current) {
        if (current.size() == last_size) return remaining() > 0;
        last_size = current.size();
        const double algo_ms = ms_since(t0) - paused_ms;
        const auto pause_start = Clock::now();

        auto restricted = solve_xu_mannor(inst.polytope, current);
        if (lp_count) *lp_count += restricted.lp_count;
        const double achieved =
            evaluate_regret_occupancy(restricted.occupancy.f, full, inst.polytope, lp_count);
        const double rel =
            std::max(0.0, exact_regret > 1e-9 ? (achieved - exact_regret) / exact_regret
                                              : achieved - exact_regret);
        for (auto& row : rows) {
            if (!row.met && rel < row.threshold) {
                row.met = true;
                row.algo_ms = algo_ms;
                row.subset = current.size();
                row.rel_error = rel;
                row.achieved_regret = achieved;
            }
        }
        paused_ms += ms_since(pause_start);
        return remaining() > 0 && algo_ms < timeout_ms;
    };

    EnumerationBudget budget;
    budget.max_millis = timeout_ms;
    budget.stall_lines = 1000;  // safety on exhausted instances
    auto gamma = enumerate_approx_gt(inst.mdp, inst.polytope, budget, seed, opts);
    if (lp_count) *lp_count += gamma.stats.lp_count;
    if (final_size) *final_size = gamma.size();
    return rows;
}

int cmd_bench(const std::string& corpus_dir, const std::string& methods_csv,
              const std::string& thresholds_csv, double timeout_ms, int threads,
              const std::string& outdir, double tol, bool no_timing,
              std::uint64_t seed) {
    std::vector<std::string> methods;
    {
        std::stringstream ss(methods_csv);
        std::string item;
        while (std::getline(ss, item, ',')) methods.push_back(item);
    }
    for (const auto& method : methods)
        if (method != "gt" && method != "pi-witness" && method != "approx-gt" &&
            method != "icg-nd" && method != "xu-mannor" && method != "brute-force")
            throw RumdpError(ErrorKind::usage_error, "unknown method " + method);
    std::vector<double> thresholds;
    {
        std::stringstream ss(thresholds_csv);
        std::string item;
        while (std::getline(ss, item, ',')) thresholds.push_back(std::stod(item));
    }

    std::vector<fs::path> files;
    if (fs::is_directory(corpus_dir)) {
        for (const auto& entry : fs::directory_iterator(corpus_dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw RumdpError(ErrorKind::usage_error, "corpus directory has no instances");

    fs::create_directories(outdir);
    const bool need_full =
        std::count(methods.begin(), methods.end(), "approx-gt") ||
        std::count(methods.begin(), methods.end(), "icg-nd") ||
        std::count(methods.begin(), methods.end(), "xu-mannor");
    const bool need_gt = need_full || std::count(methods.begin(), methods.end(), "gt");

    std::vector<std::vector<BenchRecord>> per_instance(files.size());
    parallel_for(files.size(), threads, [&](std::size_t idx) {
        const fs::path& path = files[idx];
        RumdpInstance inst = load(path.string());
        inst.validate_semantics();
        std::vector<BenchRecord>& rows = per_instance[idx];
        BenchRecord base;
        base.instance_id = path.stem().string();
        base.n = inst.mdp.n_states;
        base.m = inst.mdp.n_actions;
        base.d = inst.polytope.dim();
        base.gamma = inst.mdp.gamma;

        // Exact Gamma once per instance; defines |Gamma| and the exact MMR.
        NondominatedSet full;
        std::optional<RegretSolution> exact;
        if (need_gt) {
            EnumerateOptions opts;
            const auto t0 = Clock::now();
            opts.progress = [&](const NondominatedSet&) { return ms_since(t0) < timeout_ms; };
            full = enumerate_gt(inst.mdp, inst.polytope, opts);
        }
        if (need_full) exact = solve_xu_mannor(inst.polytope, full);

        for (const auto& method : methods) {
            if (method == "gt") {
                BenchRecord r = base;
                r.method = "gt";
                r.gamma_size = full.size();
                r.wall_ms = full.stats.wall_ms;
                r.lp_count = full.stats.lp_count;
                rows.push_back(std::move(r));
            } else if (method == "pi-witness") {
                EnumerateOptions opts;
                const auto t0 = Clock::now();
                opts.progress = [&](const NondominatedSet&) {
                    return ms_since(t0) < timeout_ms;
                };
                auto wit = enumerate_pi_witness(inst.mdp, inst.polytope, opts);
                BenchRecord r = base;
                r.method = "pi-witness";
                r.gamma_size = wit.size();
                r.wall_ms = wit.stats.wall_ms;
                r.lp_count = wit.stats.lp_count;
                rows.push_back(std::move(r));
            } else if (method == "brute-force") {
                double count = 1;
                bool too_large = false;
                for (int s = 0; s < inst.mdp.n_states; ++s) {
                    count *= inst.mdp.n_actions;
                    if (count > 1e5) { too_large = true; break; }
                }
                if (too_large) continue;  // guarded; no row
                auto brute = brute_force_nondominated(inst.mdp, inst.polytope);
                BenchRecord r = base;
                r.method = "brute-force";
                r.gamma_size = brute.size();
                r.wall_ms = brute.stats.wall_ms;
                r.lp_count = brute.stats.lp_count;
                rows.push_back(std::move(r));
            } else if (method == "xu-mannor") {
                BenchRecord r = base;
                r.method = "xu-mannor";
                r.gamma_size = full.size();
                r.wall_ms = exact->wall_ms;
                r.mmr = exact->regret;
                r.lp_count = exact->lp_count;
                rows.push_back(std::move(r));
            } else if (method == "icg-nd") {
                auto icg = solve_icg_nd(inst.mdp, inst.polytope, full, tol);
                BenchRecord r = base;
                r.method = "icg-nd";
                r.gamma_size = full.size();
                r.wall_ms = icg.wall_ms;
                r.mmr = icg.regret;
                r.lp_count = icg.lp_count;
                rows.push_back(std::move(r));
            } else if (method == "approx-gt") {
                std::int64_t lp_count = 0;
                std::size_t final_size = 0;
                auto anytime = run_anytime_approx(inst, full, exact->regret, thresholds,
                                                  timeout_ms, seed, &lp_count, &final_size);
                for (const auto& row : anytime) {
                    BenchRecord r = base;
                    r.method = "approx-gt";
                    r.lp_count = lp_count;
                    if (row.met) {
                        r.gamma_size = row.subset;
                        r.wall_ms = row.algo_ms;
                        r.mmr = row.achieved_regret;
                        r.rel_error = row.rel_error;
                    } else {
                        // Timeout mirrored as an unmet threshold: no rel_error.
                        r.gamma_size = final_size;
                        r.wall_ms = timeout_ms;
                    }
                    rows.push_back(std::move(r));
                }
            }
        }
    });

    const fs::path csv_path = fs::path(outdir) / "bench.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw RumdpError(ErrorKind::malformed_file, "cannot open " + csv_path.string());
    csv << "instance_id,n,m,d,gamma,method,gamma_size,wall_ms,mmr,rel_error,lp_count\n";
    for (const auto& rows : per_instance)
        for (const auto& r : rows) csv << csv_line(r, no_timing) << "\n";
    csv.close();

    // Scatter data per method for runtime-vs-size plots.
    for (const auto& method : methods) {
        const fs::path scatter_path = fs::path(outdir) / ("scatter_" + method + ".csv");
        std::ofstream scatter(scatter_path);
        scatter << "gamma_size,wall_ms\n";
        for (const auto& rows : per_instance)
            for (const auto& r : rows) {
                if (r.method != method) continue;
                char wall[64];
                std::snprintf(wall, sizeof(wall), "%.3f", no_timing ? 0.0 : r.wall_ms);
                scatter << r.gamma_size << ',' << wall << "\n";
            }
    }
    std::cout << csv_path.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rumdp: nondominated-policy enumeration and minimax regret "
                 "for reward-uncertain MDPs"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write seeded random instances");
    int g_states = 0, g_actions = 0, g_dim = 1, g_count = 1, g_support = 0;
    double g_gamma = 0.95, g_halfwidth = 1.0;
    std::uint64_t g_seed = 0;
    std::string g_alpha = "uniform", g_poly = "box", g_output = "instance.json";
    gen->add_option("--states", g_states, "number of states")->required();
    gen->add_option("--actions", g_actions, "number of actions")->required();
    gen->add_option("--reward-dim", g_dim, "parameter dimension of R")->required();
    gen->add_option("--gamma", g_gamma, "discount factor");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--count", g_count, "number of instances (seeds seed, seed+1, ...)");
    gen->add_option("--transition-support", g_support,
                    "successors per (s,a); 0 = min(n,4)");
    gen->add_option("--alpha-mode", g_alpha, "uniform | point-mass");
    gen->add_option("--polytope-mode", g_poly, "box | random-halfspaces");
    gen->add_option("--box-halfwidth", g_halfwidth, "box halfwidth");
    gen->add_option("-o,--output", g_output, "output file (count=1) or directory");
    int g_threads = 1;
    gen->add_option("--threads", g_threads, "instances generated in parallel");

    // enumerate
    auto* enu = app.add_subcommand("enumerate", "enumerate nondominated policies");
    std::string e_instance, e_method = "gt", e_output = "gamma.json";
    std::int64_t e_max_lines = -1, e_stall = -1, e_max_policies = -1;
    double e_max_ms = -1, e_delta = -1;
    std::uint64_t e_seed = 0;
    int e_threads = 1;
    enu->add_option("instance", e_instance, "instance file")->required();
    enu->add_option("--method", e_method, "gt | pi-witness | approx-gt");
    enu->add_option("-o,--output", e_output, "gamma dump path");
    enu->add_option("--max-lines", e_max_lines, "approx: line restart cap");
    enu->add_option("--stall-lines", e_stall, "approx: stop after this many idle lines");
    enu->add_option("--max-ms", e_max_ms, "approx: wall-clock cap");
    enu->add_option("--max-policies", e_max_policies, "approx: policy cap");
    enu->add_option("--seed", e_seed, "approx: restart seed");
    enu->add_option("--threads", e_threads, "worker threads");
    enu->add_option("--delta", e_delta, "facet-crossing offset (default auto)");

    // regret
    auto* reg = app.add_subcommand("regret", "solve minimax regret over a gamma dump");
    std::string r_instance, r_gamma, r_method = "xu-mannor", r_output = "regret.json";
    double r_tol = 1e-6;
    int r_threads = 1;
    reg->add_option("instance", r_instance, "instance file")->required();
    reg->add_option("gamma", r_gamma, "gamma dump file")->required();
    reg->add_option("--method", r_method, "icg-nd | xu-mannor");
    reg->add_option("--tol", r_tol, "icg-nd convergence tolerance");
    reg->add_option("--threads", r_threads, "concurrent adversary LPs (icg-nd)");
    reg->add_option("-o,--output", r_output, "report path");

    // verify
    auto* ver = app.add_subcommand("verify", "run the oracle checks on an instance");
    std::string v_instance, v_checks = "all";
    std::uint64_t v_seed = 1;
    int v_trials = 100, v_threads = 1;
    ver->add_option("instance", v_instance, "instance file")->required();
    ver->add_option("--checks", v_checks,
                    "comma list of validate,eq4,occupancy,bellman,region,enum or all");
    ver->add_option("--seed", v_seed, "sampling seed");
    ver->add_option("--trials", v_trials, "samples per check");
    ver->add_option("--threads", v_threads, "worker threads (reserved)");

    // bench
    auto* ben = app.add_subcommand("bench", "benchmark a corpus directory");
    std::string b_corpus, b_methods = "gt,pi-witness,approx-gt,icg-nd,xu-mannor";
    std::string b_thresholds = "0.10,0.05,0.01", b_outdir = "bench_out";
    double b_timeout = 20.0 * 60.0 * 1000.0, b_tol = 1e-6;
    int b_threads = 1;
    bool b_no_timing = false;
    std::uint64_t b_seed = 1;
    ben->add_option("--corpus", b_corpus, "directory of instance files")->required();
    ben->add_option("--methods", b_methods, "comma list of methods");
    ben->add_option("--error-thresholds", b_thresholds, "relative MMR error thresholds");
    ben->add_option("--timeout-ms", b_timeout, "per-cell timeout (default 20 minutes)");
    ben->add_option("--threads", b_threads, "instances in parallel");
    ben->add_option("-o,--outdir", b_outdir, "output directory");
    ben->add_option("--tol", b_tol, "icg-nd tolerance");
    ben->add_option("--seed", b_seed, "approx-gt seed");
    ben->add_flag("--no-timing", b_no_timing,
                  "write 0 in timing columns for byte-reproducible output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_generate(g_states, g_actions, g_dim, g_gamma, g_seed, g_count,
                                g_support, g_alpha, g_poly, g_halfwidth, g_output,
                                g_threads);
        if (enu->parsed())
            return cmd_enumerate(e_instance, e_method, e_output, e_max_lines, e_stall,
                                 e_max_ms, e_max_policies, e_seed, e_threads, e_delta);
        if (reg->parsed())
            return cmd_regret(r_instance, r_gamma, r_method, r_tol, r_output, r_threads);
        if (ver->parsed()) return cmd_verify(v_instance, v_checks, v_seed, v_trials);
        if (ben->parsed())
            return cmd_bench(b_corpus, b_methods, b_thresholds, b_timeout, b_threads,
                             b_outdir, b_tol, b_no_timing, b_seed);
    } catch (const RumdpError& e) {
        std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
        return e.kind() == ErrorKind::usage_error ? kExitUsage : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}

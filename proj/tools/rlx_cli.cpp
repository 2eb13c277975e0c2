// Command-line front end: simulate, analytic, plot and env export.

#include "rlx/analytic.hpp"
#include "rlx/environments.hpp"
#include "rlx/errors.hpp"
#include "rlx/experiment.hpp"
#include "rlx/mdp_json.hpp"
#include "rlx/summary.hpp"
#include "rlx/svg_plot.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

/// Flags that mirror config-file keys. Only flags given on the command line
/// end up in the JSON overlay, so they override the file.
struct FlagOverlay {
    struct Entry {
        CLI::Option* option;
        std::function<void(json&)> write;
    };
    std::vector<Entry> entries;

    template <class T>
    CLI::Option* add(CLI::App& app, const std::string& flag, const std::string& key, T& storage,
                     const std::string& help) {
        auto* opt = app.add_option(flag, storage, help);
        entries.push_back({opt, [key, &storage](json& j) { j[key] = storage; }});
        return opt;
    }

    void add_flag(CLI::App& app, const std::string& flag, const std::string& key, bool& storage,
                  const std::string& help) {
        auto* opt = app.add_flag(flag, storage, help);
        entries.push_back({opt, [key, &storage](json& j) { j[key] = storage; }});
    }

    json collect() const {
        json j = json::object();
        for (const auto& e : entries)
            if (e.option->count() > 0)
                e.write(j);
        return j;
    }
};

struct EnvFlags {
    std::string env = "riverswim";
    int states = 6;
    int horizon = 20;
    double p_right = 0.3, p_stay = 0.6, p_left = 0.1;
    double left_reward = 0.005, right_reward = 1.0;
    double eps = 1.0;
    int tau = 1;
    int n_branches = 1;
    std::vector<double> means;

    void register_on(CLI::App& app, FlagOverlay& overlay) {
        overlay.add(app, "--env", "env", env, "riverswim, horizon, state, or a path to an MDP JSON file");
        overlay.add(app, "--states", "states", states, "RiverSwim: number of states");
        overlay.add(app, "--horizon", "horizon", horizon, "episode length (coherence examples: 0 = minimal)");
        overlay.add(app, "--p-right", "p_right", p_right, "RiverSwim: P(move right) under RIGHT");
        overlay.add(app, "--p-stay", "p_stay", p_stay, "RiverSwim: P(stay) under RIGHT");
        overlay.add(app, "--p-left", "p_left", p_left, "RiverSwim: P(move left) under RIGHT");
        overlay.add(app, "--left-reward", "left_reward", left_reward, "RiverSwim: LEFT reward at state 0");
        overlay.add(app, "--right-reward", "right_reward", right_reward, "RiverSwim: RIGHT reward at the last state");
        overlay.add(app, "--eps", "eps", eps, "coherence examples: total value std of the uncertain action");
        overlay.add(app, "--tau", "tau", tau, "horizon example: low-road length");
        overlay.add(app, "--n-branches", "n_branches", n_branches, "state example: number of successors");
        overlay.add(app, "--means", "means", means, "coherence examples: explicit uncertain means")->delimiter(',');
    }
};

std::vector<double> parse_range(const std::string& text, double default_step) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(std::stod(item));
    if (parts.size() < 2 || parts.size() > 3)
        throw rlx::ConfigError("range must be start:stop[:step]");
    const double step = parts.size() == 3 ? parts[2] : default_step;
    if (!(step > 0.0))
        throw rlx::ConfigError("range step must be positive");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double v = parts[0] + k * step;
        if (v > parts[1] + step * 1e-9)
            break;
        out.push_back(v);
    }
    return out;
}

int run_simulate(const std::string& config_path, const json& flags, const std::string& out_path) {
    json doc = config_path.empty() ? json::object() : rlx::read_json_file(config_path);
    doc.update(flags);
    rlx::ExperimentConfig config;
    config.agents = {rlx::AgentConfig::from_name("psrl")};
    rlx::apply_config_json(config, doc);
    const auto table = rlx::run_experiment(config);
    if (out_path.empty() || out_path == "-")
        std::cout << rlx::to_csv(table);
    else
        rlx::write_csv(table, out_path);
    return 0;
}

void print_reports(const std::vector<rlx::DecisionReport>& reports, bool csv) {
    if (csv) {
        std::cout << "mode,eps,scale,c,boost,prob,action\n";
        for (const auto& r : reports)
            std::cout << rlx::to_string(r.mode) << ',' << rlx::format_double(r.eps) << ',' << r.scale << ','
                      << rlx::format_double(r.c) << ',' << rlx::format_double(r.boost) << ','
                      << rlx::format_double(r.explore_probability) << ','
                      << (r.chosen_action == 0 ? std::string("mixed") : std::to_string(r.chosen_action)) << '\n';
        return;
    }
    std::printf("%-20s %8s %6s %8s %10s %10s %7s\n", "mode", "eps", "scale", "c", "boost", "prob", "action");
    for (const auto& r : reports)
        std::printf("%-20s %8.4g %6d %8.4g %10.6g %10.6g %7s\n", std::string(rlx::to_string(r.mode)).c_str(), r.eps,
                    r.scale, r.c, r.boost, r.explore_probability,
                    r.chosen_action == 0 ? "mixed" : std::to_string(r.chosen_action).c_str());
}

std::vector<rlx::DecisionMode> parse_modes(const std::string& mode) {
    using rlx::DecisionMode;
    if (mode == "all")
        return {DecisionMode::literature_optimism, DecisionMode::coherent_optimism, DecisionMode::randomized};
    if (mode == "literature")
        return {DecisionMode::literature_optimism};
    if (mode == "coherent")
        return {DecisionMode::coherent_optimism};
    if (mode == "randomized")
        return {DecisionMode::randomized};
    throw rlx::ConfigError("mode must be all, literature, coherent or randomized");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular exploration lab: posterior sampling vs optimism on episodic MDPs"};
    app.require_subcommand(1);

    // simulate ---------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "run agents on an environment and write a regret CSV");
    FlagOverlay sim_overlay;
    EnvFlags sim_env;
    sim_env.register_on(*simulate, sim_overlay);
    std::vector<std::string> agents;
    double c = 1.0, delta = 0.05, dirichlet = 1.0, ng_mu0 = 0.0, ng_lambda = 1.0, ng_alpha = 1.0, ng_beta = 1.0;
    int episodes = 5000, seeds = 20, threads = 1;
    std::uint64_t master_seed = 0;
    std::string regret = "expected", prior = "flat", config_path, sim_out;
    bool nonstationary = false;
    sim_overlay.add(*simulate, "--agent", "agents", agents, "psrl, ucrl2, boost-std, boost-var, greedy (repeatable)")
        ->delimiter(',');
    sim_overlay.add(*simulate, "--c", "c", c, "optimism scale for boost agents");
    sim_overlay.add(*simulate, "--delta", "delta", delta, "UCRL2 confidence parameter");
    sim_overlay.add(*simulate, "--prior", "prior", prior, "flat, or matched (coherence environments)");
    sim_overlay.add(*simulate, "--dirichlet", "dirichlet", dirichlet, "flat Dirichlet pseudo-count");
    sim_overlay.add(*simulate, "--ng-mu0", "ng_mu0", ng_mu0, "Normal-Gamma prior mean");
    sim_overlay.add(*simulate, "--ng-lambda", "ng_lambda", ng_lambda, "Normal-Gamma pseudo-observations");
    sim_overlay.add(*simulate, "--ng-alpha", "ng_alpha", ng_alpha, "Normal-Gamma shape");
    sim_overlay.add(*simulate, "--ng-beta", "ng_beta", ng_beta, "Normal-Gamma rate");
    sim_overlay.add_flag(*simulate, "--nonstationary", "nonstationary", nonstationary,
                         "learn separate beliefs for every period");
    sim_overlay.add(*simulate, "--episodes", "episodes", episodes, "episodes per run");
    sim_overlay.add(*simulate, "--seeds", "seeds", seeds, "independent runs per agent");
    sim_overlay.add(*simulate, "--master-seed", "master_seed", master_seed, "root of all random streams");
    sim_overlay.add(*simulate, "--regret", "regret", regret, "expected or realized");
    sim_overlay.add(*simulate, "--threads", "threads", threads, "worker threads (output is identical)");
    simulate->add_option("--config", config_path, "JSON config file; flags override its keys");
    simulate->add_option("--out", sim_out, "output CSV (default stdout)");

    // analytic ---------------------------------------------------------------
    auto* analytic = app.add_subcommand("analytic", "closed-form decisions for the coherence examples");
    analytic->require_subcommand(1);
    double a_eps = 1.0, a_c = 1.0;
    int a_scale = 1;
    std::string a_mode = "all", eps_range, scale_range;
    bool a_csv = false;
    for (const char* which : {"horizon", "state"}) {
        auto* sub = analytic->add_subcommand(which, std::string(which) + " example");
        sub->add_option("--eps", a_eps, "total std of the uncertain action value");
        sub->add_option("--scale", a_scale, "tau (horizon) or N (state)");
        sub->add_option("--c", a_c, "degree of optimism");
        sub->add_option("--mode", a_mode, "all, literature, coherent or randomized");
        sub->add_option("--eps-range", eps_range, "sweep start:stop:step");
        sub->add_option("--scale-range", scale_range, "sweep start:stop[:step]");
        sub->add_flag("--csv", a_csv, "print CSV instead of aligned text");
    }

    // plot -------------------------------------------------------------------
    auto* plot_cmd = app.add_subcommand("plot", "quantile curves of cumulative regret as SVG");
    std::string plot_in, plot_out, quantile_text = "0.1,0.5,0.9", summary_out;
    plot_cmd->add_option("--in", plot_in, "regret CSV from simulate")->required();
    plot_cmd->add_option("--out", plot_out, "output SVG")->required();
    plot_cmd->add_option("--quantiles", quantile_text, "comma-separated quantile levels");
    plot_cmd->add_option("--summary-out", summary_out, "also write the quantile table as CSV");

    // env export -------------------------------------------------------------
    auto* env_cmd = app.add_subcommand("env", "environment utilities");
    env_cmd->require_subcommand(1);
    auto* env_export = env_cmd->add_subcommand("export", "write a built-in environment as MDP JSON");
    FlagOverlay export_overlay;
    EnvFlags export_env;
    export_env.register_on(*env_export, export_overlay);
    std::uint64_t export_master = 0;
    int export_seed = 0;
    std::string export_out;
    env_export->add_option("--master-seed", export_master, "stream root for drawn coherence means");
    env_export->add_option("--seed", export_seed, "seed index for drawn coherence means");
    env_export->add_option("--out", export_out, "output JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return run_simulate(config_path, sim_overlay.collect(), sim_out);

        if (analytic->parsed()) {
            const bool horizon = analytic->get_subcommand("horizon")->parsed();
            const auto modes = parse_modes(a_mode);
            const auto eps_values = eps_range.empty() ? std::vector<double>{a_eps} : parse_range(eps_range, 1.0);
            const auto scale_values =
                scale_range.empty() ? std::vector<double>{double(a_scale)} : parse_range(scale_range, 1.0);
            std::vector<rlx::DecisionReport> reports;
            for (double e : eps_values)
                for (double s : scale_values)
                    for (auto m : modes)
                        reports.push_back(horizon ? rlx::horizon_decision(e, int(std::lround(s)), a_c, m)
                                                  : rlx::state_decision(e, int(std::lround(s)), a_c, m));
            print_reports(reports, a_csv);
            return 0;
        }

        if (plot_cmd->parsed()) {
            std::vector<double> quantiles;
            std::stringstream ss(quantile_text);
            for (std::string item; std::getline(ss, item, ',');)
                quantiles.push_back(std::stod(item));
            const auto rows = rlx::summarize(rlx::read_csv(std::filesystem::path(plot_in)), quantiles);
            rlx::render_plot(rows, plot_out);
            if (!summary_out.empty()) {
                std::ofstream out(summary_out, std::ios::binary);
                out << "agent,episode,quantile,cum_regret\n";
                for (const auto& r : rows)
                    out << r.agent << ',' << r.episode << ',' << rlx::format_double(r.quantile) << ','
                        << rlx::format_double(r.cumulative_regret) << '\n';
            }
            return 0;
        }

        if (env_export->parsed()) {
            rlx::ExperimentConfig config;
            rlx::apply_config_json(config, export_overlay.collect());
            rlx::save_mdp(rlx::make_environment(config.env, export_master, export_seed), export_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

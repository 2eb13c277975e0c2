#include "rlx/experiment.hpp"

#include "rlx/errors.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace rlx {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (num_episodes < 1)
        throw ConfigError("num_episodes must be at least 1");
    if (num_seeds < 1)
        throw ConfigError("num_seeds must be at least 1");
    if (agents.empty())
        throw ConfigError("at least one agent is required");
    for (const auto& a : agents)
        a.validate();
    if (env.name != "riverswim" && env.name != "horizon" && env.name != "state" && env.name != "file")
        throw ConfigError("unknown environment '" + env.name + "'");
    if (prior == PriorChoice::matched && !env.is_coherence())
        throw ConfigError("the matched prior is only defined for the horizon and state environments");
}

std::uint64_t episode_stream(std::uint64_t master_seed, int agent_index, int seed_index, int episode,
                             std::uint64_t purpose) noexcept {
    return mix_stream(master_seed,
                      {std::uint64_t(agent_index), std::uint64_t(seed_index), std::uint64_t(episode), purpose});
}

TabularMDP make_environment(const EnvironmentSpec& env, std::uint64_t master_seed, int seed_index) {
    if (env.name == "riverswim")
        return make_riverswim(env.riverswim);
    if (env.name == "file")
        return load_mdp(env.file);
    Rng rng = make_rng(mix_stream(master_seed, {kEnvironmentStream, std::uint64_t(seed_index)}));
    if (env.name == "horizon")
        return make_horizon_example(env.coherence, rng);
    if (env.name == "state")
        return make_state_example(env.coherence, rng);
    throw ConfigError("unknown environment '" + env.name + "'");
}

AgentState initial_agent_state(const ExperimentConfig& config, const AgentConfig& agent, const TabularMDP& truth) {
    if (config.prior == PriorChoice::matched) {
        if (config.env.name == "horizon")
            return AgentState(horizon_example_prior(config.env.coherence, agent.stationary));
        if (config.env.name == "state")
            return AgentState(state_example_prior(config.env.coherence, agent.stationary));
        throw ConfigError("the matched prior needs a coherence environment");
    }
    AgentState state(agent, truth.num_states(), truth.num_actions(), truth.horizon());
    state.posterior.set_initial_distribution(
        std::vector<double>(truth.initial_distribution().begin(), truth.initial_distribution().end()));
    return state;
}

namespace {

std::vector<RegretRecord> run_unit(const ExperimentConfig& config, int agent_index, int seed_index) {
    const AgentConfig& agent = config.agents[agent_index];
    const std::string label = agent.label();
    const TabularMDP truth = make_environment(config.env, config.master_seed, seed_index);
    const PlanResult optimal = backward_induction(truth);
    AgentState state = initial_agent_state(config, agent, truth);

    std::vector<RegretRecord> out;
    out.reserve(config.num_episodes);
    double cumulative = 0.0;
    for (int episode = 1; episode <= config.num_episodes; ++episode) {
        Rng plan_rng = make_rng(episode_stream(config.master_seed, agent_index, seed_index, episode, kPlanStream));
        const Policy policy = plan(agent, state, plan_rng);

        Rng sim_rng =
            make_rng(episode_stream(config.master_seed, agent_index, seed_index, episode, kSimulateStream));
        const Observation obs = simulate_episode(truth, policy, sim_rng);

        double regret;
        if (config.regret_kind == RegretKind::expected) {
            regret = expected_regret(truth, optimal.v_values, policy);
        } else {
            regret = optimal.v_values(0, obs.states.front()) -
                     std::accumulate(obs.rewards.begin(), obs.rewards.end(), 0.0);
        }
        if (!std::isfinite(regret))
            throw std::runtime_error("non-finite regret for agent " + label + ", seed " +
                                     std::to_string(seed_index) + ", episode " + std::to_string(episode));
        cumulative += regret;
        out.push_back({label, seed_index, episode, regret, cumulative});
        state.observe(obs);
    }
    return out;
}

} // namespace

RegretTable run_experiment(const ExperimentConfig& config) {
    config.validate();
    const int num_agents = int(config.agents.size());
    const int units = num_agents * config.num_seeds;
    std::vector<std::vector<RegretRecord>> results(units);
    std::vector<std::exception_ptr> errors(units);

    auto work = [&](int unit) {
        try {
            results[unit] = run_unit(config, unit / config.num_seeds, unit % config.num_seeds);
        } catch (...) {
            errors[unit] = std::current_exception();
        }
    };

    const int threads = std::clamp(config.threads, 1, units);
    if (threads == 1) {
        for (int u = 0; u < units; ++u)
            work(u);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k)
            pool.emplace_back([&] {
                for (int u = next++; u < units; u = next++)
                    work(u);
            });
        for (auto& th : pool)
            th.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    RegretTable table;
    table.records.reserve(std::size_t(units) * config.num_episodes);
    for (auto& r : results)
        table.records.insert(table.records.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    return table;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string to_csv(const RegretTable& table) {
    std::string out = "agent,seed,episode,regret,cum_regret\n";
    for (const auto& r : table.records) {
        out += r.agent;
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += std::to_string(r.episode);
        out += ',';
        out += format_double(r.regret);
        out += ',';
        out += format_double(r.cum_regret);
        out += '\n';
    }
    return out;
}

void write_csv(const RegretTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << to_csv(table);
}

namespace {

template <class T>
T parse_field(std::string_view text, int line, const char* name) {
    T value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("line " + std::to_string(line) + ": bad " + name + " '" + std::string(text) + "'");
    return value;
}

} // namespace

RegretTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "agent,seed,episode,regret,cum_regret")
        throw ParseError("line 1: expected header agent,seed,episode,regret,cum_regret");
    RegretTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            fields.push_back(rest.substr(0, pos));
        fields.push_back(rest);
        if (fields.size() != 5)
            throw ParseError("line " + std::to_string(lineno) + ": expected 5 fields");
        table.records.push_back({std::string(fields[0]), parse_field<int>(fields[1], lineno, "seed"),
                                 parse_field<int>(fields[2], lineno, "episode"),
                                 parse_field<double>(fields[3], lineno, "regret"),
                                 parse_field<double>(fields[4], lineno, "cum_regret")});
    }
    return table;
}

RegretTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");
    return read_csv(in);
}

// ---------------------------------------------------------------------------
// Config files

RegretKind parse_regret_kind(std::string_view text) {
    if (text == "expected")
        return RegretKind::expected;
    if (text == "realized")
        return RegretKind::realized;
    throw ConfigError("regret must be 'expected' or 'realized'");
}

PriorChoice parse_prior_choice(std::string_view text) {
    if (text == "flat")
        return PriorChoice::flat;
    if (text == "matched")
        return PriorChoice::matched;
    throw ConfigError("prior must be 'flat' or 'matched'");
}

namespace {

template <class T>
T get_as(const json& v, const char* key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

template <class T>
void set_if(const json& doc, const char* key, T& target) {
    if (auto it = doc.find(key); it != doc.end())
        target = get_as<T>(*it, key);
}

AgentConfig agent_from_json(const json& v) {
    if (v.is_string())
        return AgentConfig::from_name(v.get<std::string>());
    if (!v.is_object() || !v.contains("kind"))
        throw ConfigError("agent entries must be names or objects with a 'kind'");
    AgentConfig a = AgentConfig::from_name(get_as<std::string>(v["kind"], "kind"));
    set_if(v, "name", a.name);
    set_if(v, "c", a.optimism_scale);
    set_if(v, "delta", a.confidence_delta);
    return a;
}

} // namespace

void apply_config_json(ExperimentConfig& config, const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    if (auto it = doc.find("env"); it != doc.end()) {
        const auto name = get_as<std::string>(*it, "env");
        if (name == "riverswim" || name == "horizon" || name == "state") {
            config.env.name = name;
        } else {
            config.env.name = "file";
            config.env.file = name;
        }
    }
    auto& river = config.env.riverswim;
    auto& coh = config.env.coherence;
    set_if(doc, "states", river.num_states);
    if (auto it = doc.find("horizon"); it != doc.end()) {
        river.horizon = get_as<int>(*it, "horizon");
        coh.horizon = river.horizon;
    }
    set_if(doc, "p_right", river.p_right);
    set_if(doc, "p_stay", river.p_stay);
    set_if(doc, "p_left", river.p_left);
    set_if(doc, "left_reward", river.left_reward);
    set_if(doc, "right_reward", river.right_reward);
    set_if(doc, "eps", coh.eps);
    set_if(doc, "tau", coh.tau);
    set_if(doc, "n_branches", coh.n_branches);
    set_if(doc, "means", coh.true_means);

    if (auto it = doc.find("agents"); it != doc.end()) {
        if (!it->is_array())
            throw ConfigError("'agents' must be an array");
        config.agents.clear();
        for (const auto& v : *it)
            config.agents.push_back(agent_from_json(v));
    }
    if (auto it = doc.find("agent"); it != doc.end())
        config.agents = {agent_from_json(*it)};

    for (auto& a : config.agents) {
        set_if(doc, "c", a.optimism_scale);
        set_if(doc, "delta", a.confidence_delta);
        set_if(doc, "dirichlet", a.prior.dirichlet);
        set_if(doc, "ng_mu0", a.prior.reward.mu0);
        set_if(doc, "ng_lambda", a.prior.reward.lambda);
        set_if(doc, "ng_alpha", a.prior.reward.alpha);
        set_if(doc, "ng_beta", a.prior.reward.beta);
        if (auto it = doc.find("nonstationary"); it != doc.end())
            a.stationary = !get_as<bool>(*it, "nonstationary");
    }

    set_if(doc, "episodes", config.num_episodes);
    set_if(doc, "seeds", config.num_seeds);
    set_if(doc, "master_seed", config.master_seed);
    set_if(doc, "threads", config.threads);
    if (auto it = doc.find("regret"); it != doc.end())
        config.regret_kind = parse_regret_kind(get_as<std::string>(*it, "regret"));
    if (auto it = doc.find("prior"); it != doc.end())
        config.prior = parse_prior_choice(get_as<std::string>(*it, "prior"));
}

} // namespace rlx

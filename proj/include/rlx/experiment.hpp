#pragma once

#include "rlx/agents.hpp"
#include "rlx/environments.hpp"
#include "rlx/mdp.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rlx {

enum class RegretKind {
    expected, ///< V*_0 - V^pi_0 under rho, from exact policy evaluation
    realized, ///< V*_0(s_0) - sum of sampled rewards
};

enum class PriorChoice {
    flat,    ///< each agent's PriorConfig
    matched, ///< the construction prior of a coherence environment
};

struct EnvironmentSpec {
    /// riverswim, horizon, state or file.
    std::string name = "riverswim";
    RiverSwimParams riverswim{};
    CoherenceParams coherence{};
    std::filesystem::path file;

    bool is_coherence() const noexcept { return name == "horizon" || name == "state"; }
};

struct ExperimentConfig {
    EnvironmentSpec env{};
    std::vector<AgentConfig> agents;
    int num_episodes = 5000;
    int num_seeds = 20;
    std::uint64_t master_seed = 0;
    RegretKind regret_kind = RegretKind::expected;
    PriorChoice prior = PriorChoice::flat;
    /// Worker threads over (agent, seed) pairs; results do not depend on it.
    int threads = 1;

    void validate() const;
};

struct RegretRecord {
    std::string agent;
    int seed = 0;
    int episode = 0;
    double regret = 0.0;
    double cum_regret = 0.0;

    bool operator==(const RegretRecord&) const = default;
};

/// Records sorted by (agent order, seed, episode); episodes count from 1.
struct RegretTable {
    std::vector<RegretRecord> records;

    bool operator==(const RegretTable&) const = default;
};

/// Stream words. Every (agent, seed, episode) derives
/// mix_stream(master, {agent, seed, episode, purpose}); environment truth draws
/// use mix_stream(master, {kEnvironmentStream, seed}) and are shared by all agents.
inline constexpr std::uint64_t kEnvironmentStream = 0x656e7669726f6eULL;
inline constexpr std::uint64_t kPlanStream = 1;
inline constexpr std::uint64_t kSimulateStream = 2;

std::uint64_t episode_stream(std::uint64_t master_seed, int agent_index, int seed_index, int episode,
                             std::uint64_t purpose) noexcept;

/// True MDP for one seed. Coherence environments draw their uncertain means
/// from the prior unless explicit means are configured.
TabularMDP make_environment(const EnvironmentSpec& env, std::uint64_t master_seed, int seed_index);

/// Starting belief for one agent on the environment.
AgentState initial_agent_state(const ExperimentConfig& config, const AgentConfig& agent, const TabularMDP& truth);

/// Runs every (agent, seed) pair for num_episodes episodes.
RegretTable run_experiment(const ExperimentConfig& config);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Header agent,seed,episode,regret,cum_regret then one row per record.
std::string to_csv(const RegretTable& table);
void write_csv(const RegretTable& table, const std::filesystem::path& path);
RegretTable read_csv(std::istream& in);
RegretTable read_csv(const std::filesystem::path& path);

/// Overlays keys of a JSON config file onto `config`.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& doc);

RegretKind parse_regret_kind(std::string_view text);
PriorChoice parse_prior_choice(std::string_view text);

} // namespace rlx

#pragma once

#include "rlx/mdp.hpp"
#include "rlx/posterior.hpp"

#include <json.hpp>

#include <filesystem>

namespace rlx {

// JSON container shared by MDP files and posterior checkpoints:
//   { "S", "A", "H", "rho", "stationary",
//     "mean_reward": [t][s][a], "reward_std": [t][s][a] or null,
//     "transition": [t][s][a][s'] }
// Stationary files drop the leading [t] level. Posterior checkpoints carry
// "dirichlet" (shaped like "transition") and "normal_gamma" ([t][s][a] of
// {"mu0", "lambda", "alpha", "beta"}) instead of the MDP tables.

nlohmann::json mdp_to_json(const TabularMDP& mdp);
/// Throws ParseError naming the field path, or ValidationError.
TabularMDP mdp_from_json(const nlohmann::json& doc);

nlohmann::json posterior_to_json(const Posterior& posterior);
Posterior posterior_from_json(const nlohmann::json& doc);

void save_posterior(const Posterior& posterior, const std::filesystem::path& path);
Posterior load_posterior(const std::filesystem::path& path);

/// Reads a whole JSON file; throws ParseError with the path on failure.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

} // namespace rlx

#pragma once

#include <cstdint>
#include <vector>

#include "regretlab/config.hpp"
#include "regretlab/mdp.hpp"
#include "regretlab/trace.hpp"

namespace regretlab {

/// One episodic trial. Each episode the agent plans, s₁ is drawn from p0, and
/// H steps are sampled. The episode's regret is V*(1, s₁) - V^{π_k}(1, s₁)
/// computed by dynamic programming on the true MDP. Diagnostics, when enabled,
/// are evaluated on the counters as they stood before the episode.
RegretTrace run_episode_loop(const RunConfig& config, const EpisodicMDP& mdp, std::size_t trial,
                             std::uint64_t seed);

/// Trial 0 of `config`, with the environment built from config.env.
RegretTrace run_episode_loop(const RunConfig& config);

/// One UCRL trial of config.steps() steps without episodic reset. Step regret
/// is ρ* - r(s_t, a_t) with mean rewards; one row per doubling episode.
RegretTrace run_ucrl_loop(const RunConfig& config, const EpisodicMDP& mdp, std::size_t trial,
                          std::uint64_t seed);

/// All trials of `config`. Trial i uses trial_seed(master_seed, i) and runs on
/// one of resolve_parallelism(config) workers; results come back in trial order.
std::vector<RegretTrace> run_trials(const RunConfig& config);
std::vector<RegretTrace> run_trials(const RunConfig& config, const EpisodicMDP& mdp);

}  // namespace regretlab

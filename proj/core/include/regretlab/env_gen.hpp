#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "regretlab/mdp.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

enum class EnvKind { contextual, random_mdp, mab, max_reward_everywhere };

struct EnvSpec {
    EnvKind kind = EnvKind::contextual;
    std::size_t S = 1, A = 1, H = 1;
    /// Concentration of the symmetric Dirichlet law used for μ and for
    /// transition rows.
    double mu_concentration = 1.0;
    /// Planted gap between the best and second-best arm of every context.
    std::optional<double> reward_gap;
    /// Common best reward of max_reward_everywhere instances.
    double r_star = 0.9;
    RewardNoise reward_noise = RewardNoise::bernoulli;
    std::uint64_t seed = 0;
};

/// Contextual-bandit MDP: every row p(s,a,.) equals μ and p0 = μ.
/// μ is resampled until min_s μ(s) >= 0.5 / S. μ and the rewards do not depend
/// on H, so instances that differ only in H share contexts and rewards.
EpisodicMDP make_contextual(const EnvSpec& spec);

/// Contextual-bandit MDP from an explicit context law and (s,a)-ordered mean
/// rewards. Rejects μ with a zero entry.
EpisodicMDP make_contextual(std::span<const double> mu, std::span<const double> rewards,
                            std::size_t num_actions, std::size_t horizon,
                            RewardNoise noise = RewardNoise::bernoulli);

/// Generic stationary MDP: Dirichlet transition rows, uniform rewards, uniform p0.
EpisodicMDP make_random_mdp(const EnvSpec& spec);

/// Multi-armed bandit embedded as a single-context MDP.
EpisodicMDP make_mab(const EnvSpec& spec);

/// max_a r(s,a) = r_star in every state; transitions as make_random_mdp.
EpisodicMDP make_max_reward_everywhere(const EnvSpec& spec);

/// Dispatches on spec.kind.
EpisodicMDP make_env(const EnvSpec& spec);

struct StepOutcome {
    double reward;
    StateIndex next_state;
};

StepOutcome sample_step(const EpisodicMDP& mdp, StateIndex s, ActionIndex a, Rng& rng);

/// Draws from a discrete distribution by inverse CDF.
StateIndex sample_categorical(std::span<const double> dist, Rng& rng);

/// Symmetric Dirichlet draw of dimension n.
std::vector<double> sample_dirichlet(std::size_t n, double concentration, Rng& rng);

}  // namespace regretlab

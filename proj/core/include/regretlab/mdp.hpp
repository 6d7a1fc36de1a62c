#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace regretlab {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

enum class RewardNoise { bernoulli, deterministic };

/// Context distribution of an MDP whose next-state law is the same for every
/// state-action pair (a contextual bandit unrolled over H steps).
struct ContextMetadata {
    std::vector<double> mu;
    double mu_min = 0.0;

    bool operator==(const ContextMetadata&) const = default;
};

/// Finite-horizon tabular MDP with stationary dynamics.
///
/// Transition rows are validated at construction: a row whose sum is within
/// 1e-9 of one is renormalized, anything further away is rejected. Rewards are
/// stored as means in [0,1].
class EpisodicMDP {
public:
    /// `p` is flattened in (s, a, s') order, `r` in (s, a) order.
    EpisodicMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                std::vector<double> p, std::vector<double> r, std::vector<double> p0,
                RewardNoise noise = RewardNoise::bernoulli,
                std::optional<ContextMetadata> metadata = std::nullopt);

    std::size_t num_states() const { return S_; }
    std::size_t num_actions() const { return A_; }
    std::size_t horizon() const { return H_; }

    double p(StateIndex s, ActionIndex a, StateIndex next) const {
        return p_[(s * A_ + a) * S_ + next];
    }
    std::span<const double> row(StateIndex s, ActionIndex a) const {
        return {p_.data() + (s * A_ + a) * S_, S_};
    }
    double reward(StateIndex s, ActionIndex a) const { return r_[s * A_ + a]; }
    std::span<const double> initial() const { return p0_; }
    RewardNoise noise() const { return noise_; }
    const std::optional<ContextMetadata>& metadata() const { return meta_; }

    const std::vector<double>& transitions() const { return p_; }
    const std::vector<double>& rewards() const { return r_; }

    /// Same instance with a different horizon.
    EpisodicMDP with_horizon(std::size_t horizon) const;

    bool operator==(const EpisodicMDP&) const = default;

private:
    std::size_t S_, A_, H_;
    std::vector<double> p_;
    std::vector<double> r_;
    std::vector<double> p0_;
    RewardNoise noise_;
    std::optional<ContextMetadata> meta_;
};

/// Deterministic time-dependent decision rule, indexed by t in 1..H.
class Policy {
public:
    Policy() = default;
    Policy(std::size_t horizon, std::size_t num_states, ActionIndex fill = 0)
        : H_(horizon), S_(num_states), a_(horizon * num_states, fill) {}

    std::size_t horizon() const { return H_; }
    std::size_t num_states() const { return S_; }

    ActionIndex operator()(std::size_t t, StateIndex s) const { return a_[(t - 1) * S_ + s]; }
    ActionIndex& at(std::size_t t, StateIndex s) { return a_[(t - 1) * S_ + s]; }
    ActionIndex at(std::size_t t, StateIndex s) const { return a_[(t - 1) * S_ + s]; }

    bool operator==(const Policy&) const = default;

private:
    std::size_t H_ = 0, S_ = 0;
    std::vector<ActionIndex> a_;
};

/// Values for t in 1..H+1. Row H+1 is the explicit zero terminal row.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(std::size_t horizon, std::size_t num_states)
        : H_(horizon), S_(num_states), v_((horizon + 1) * num_states, 0.0) {}

    std::size_t horizon() const { return H_; }
    std::size_t num_states() const { return S_; }

    double operator()(std::size_t t, StateIndex s) const { return v_[(t - 1) * S_ + s]; }
    double& at(std::size_t t, StateIndex s) { return v_[(t - 1) * S_ + s]; }
    double at(std::size_t t, StateIndex s) const { return v_[(t - 1) * S_ + s]; }

    std::span<const double> step(std::size_t t) const { return {v_.data() + (t - 1) * S_, S_}; }
    std::span<double> step(std::size_t t) { return {v_.data() + (t - 1) * S_, S_}; }

    bool operator==(const ValueTable&) const = default;

private:
    std::size_t H_ = 0, S_ = 0;
    std::vector<double> v_;
};

/// w(t, s, a): probability of being in s and taking a at step t.
class OccupancyTable {
public:
    OccupancyTable(std::size_t horizon, std::size_t num_states, std::size_t num_actions)
        : H_(horizon), S_(num_states), A_(num_actions),
          w_(horizon * num_states * num_actions, 0.0) {}

    std::size_t horizon() const { return H_; }
    std::size_t num_states() const { return S_; }
    std::size_t num_actions() const { return A_; }

    double operator()(std::size_t t, StateIndex s, ActionIndex a) const {
        return w_[((t - 1) * S_ + s) * A_ + a];
    }
    double& at(std::size_t t, StateIndex s, ActionIndex a) {
        return w_[((t - 1) * S_ + s) * A_ + a];
    }

    /// Σ_t w(t, s, a), flattened in (s, a) order.
    std::vector<double> aggregate() const;

    /// Adds Σ_t w(t, s, a) into `acc`, flattened in (s, a) order.
    void accumulate_into(std::span<double> acc) const;

private:
    std::size_t H_, S_, A_;
    std::vector<double> w_;
};

/// Optimal values and greedy policy by backward induction (lowest action
/// index wins ties).
struct Solution {
    ValueTable values;
    Policy policy;
};

Solution value_iteration(const EpisodicMDP& mdp);

ValueTable policy_evaluation(const EpisodicMDP& mdp, const Policy& pi);

OccupancyTable occupancy(const EpisodicMDP& mdp, const Policy& pi);

/// The MDP in which the single action plays all original actions uniformly
/// at random. Its value is the value of the uniform-random policy.
EpisodicMDP action_averaged(const EpisodicMDP& mdp);

/// max - min. Throws std::invalid_argument on an empty input.
double range(std::span<const double> v);

}  // namespace regretlab

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "regretlab/mdp.hpp"
#include "regretlab/rng.hpp"
#include "regretlab/ubev.hpp"

namespace regretlab {

enum class AgentKind { ubev_s, ubev, ucrl, uniform, oracle };

std::string_view to_string(AgentKind kind);
AgentKind agent_kind_from_string(std::string_view name);

/// An episodic learner: plan once per episode, then act along one trajectory.
///
/// Every agent keeps stationary (time-pooled) counters so diagnostics can be
/// computed uniformly across agent kinds.
class EpisodicAgent {
public:
    virtual ~EpisodicAgent() = default;

    virtual void plan() = 0;
    virtual ActionIndex act(std::size_t t, StateIndex s, Rng& rng) const = 0;
    virtual void observe(std::span<const Transition> trajectory) = 0;

    /// Current deterministic policy, or nullptr for randomized agents.
    virtual const Policy* policy() const = 0;
    /// Current optimistic values, or nullptr when the agent has none.
    virtual const ValueTable* v_tilde() const = 0;
    virtual const AgentCounters& counters() const = 0;
};

class UbevSAgent final : public EpisodicAgent {
public:
    UbevSAgent(std::size_t num_states, std::size_t num_actions, UbevParams params);

    void plan() override;
    ActionIndex act(std::size_t t, StateIndex s, Rng& rng) const override;
    void observe(std::span<const Transition> trajectory) override;
    const Policy* policy() const override { return &plan_.policy; }
    const ValueTable* v_tilde() const override { return &plan_.v_tilde; }
    const AgentCounters& counters() const override { return counters_; }

    const PlanResult& last_plan() const { return plan_; }

private:
    UbevParams params_;
    AgentCounters counters_;
    PlanResult plan_;
};

class UbevAgent final : public EpisodicAgent {
public:
    UbevAgent(std::size_t horizon, std::size_t num_states, std::size_t num_actions, double delta);

    void plan() override;
    ActionIndex act(std::size_t t, StateIndex s, Rng& rng) const override;
    void observe(std::span<const Transition> trajectory) override;
    const Policy* policy() const override { return &plan_.policy; }
    const ValueTable* v_tilde() const override { return &plan_.v_tilde; }
    const AgentCounters& counters() const override { return pooled_; }

    const NonStationaryCounters& per_step_counters() const { return counters_; }
    const PlanResult& last_plan() const { return plan_; }

private:
    double delta_;
    NonStationaryCounters counters_;
    AgentCounters pooled_;
    PlanResult plan_;
};

/// Picks every action uniformly at random.
class UniformAgent final : public EpisodicAgent {
public:
    UniformAgent(std::size_t horizon, std::size_t num_states, std::size_t num_actions);

    void plan() override {}
    ActionIndex act(std::size_t t, StateIndex s, Rng& rng) const override;
    void observe(std::span<const Transition> trajectory) override;
    const Policy* policy() const override { return nullptr; }
    const ValueTable* v_tilde() const override { return nullptr; }
    const AgentCounters& counters() const override { return counters_; }

private:
    std::size_t H_, A_;
    AgentCounters counters_;
};

/// Follows the optimal policy of the true MDP.
class OracleAgent final : public EpisodicAgent {
public:
    explicit OracleAgent(const EpisodicMDP& mdp);

    void plan() override {}
    ActionIndex act(std::size_t t, StateIndex s, Rng& rng) const override;
    void observe(std::span<const Transition> trajectory) override;
    const Policy* policy() const override { return &solution_.policy; }
    const ValueTable* v_tilde() const override { return &solution_.values; }
    const AgentCounters& counters() const override { return counters_; }

private:
    std::size_t H_;
    Solution solution_;
    AgentCounters counters_;
};

struct AgentOptions {
    AgentKind kind = AgentKind::ubev_s;
    double delta = 0.1;
    PhiPlusMode phi_plus_mode = PhiPlusMode::per_episode;
};

/// Builds an episodic agent. AgentKind::ucrl is not episodic and is rejected.
std::unique_ptr<EpisodicAgent> make_episodic_agent(const AgentOptions& options,
                                                   const EpisodicMDP& mdp);

}  // namespace regretlab

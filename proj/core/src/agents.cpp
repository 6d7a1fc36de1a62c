#include "regretlab/agents.hpp"

#include <stdexcept>
#include <string>

namespace regretlab {

std::string_view to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::ubev_s: return "ubev_s";
        case AgentKind::ubev: return "ubev";
        case AgentKind::ucrl: return "ucrl";
        case AgentKind::uniform: return "uniform";
        case AgentKind::oracle: return "oracle";
    }
    return "?";
}

AgentKind agent_kind_from_string(std::string_view name) {
    for (auto k : {AgentKind::ubev_s, AgentKind::ubev, AgentKind::ucrl, AgentKind::uniform,
                   AgentKind::oracle}) {
        if (name == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown agent kind '" + std::string(name) + "'");
}

namespace {

void check_step(const Policy& pi, std::size_t t, StateIndex s) {
    if (t < 1 || t > pi.horizon() || s >= pi.num_states()) {
        throw std::out_of_range("act: (t, s) outside the policy table");
    }
}

}  // namespace

UbevSAgent::UbevSAgent(std::size_t num_states, std::size_t num_actions, UbevParams params)
    : params_(params), counters_(num_states, num_actions) {
    bonus_log_term(num_states, num_actions, params.H, params.delta);
}

void UbevSAgent::plan() {
    plan_ = plan_ubevs(counters_, params_);
    counters_.phi_plus = plan_.phi_plus_after;
}

ActionIndex UbevSAgent::act(std::size_t t, StateIndex s, Rng&) const {
    return regretlab::act(plan_, t, s);
}

void UbevSAgent::observe(std::span<const Transition> trajectory) {
    update_counters(counters_, trajectory, params_.H);
}

UbevAgent::UbevAgent(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                     double delta)
    : delta_(delta), counters_(horizon, num_states, num_actions), pooled_(num_states, num_actions) {
    bonus_log_term(num_states, num_actions, horizon, delta);
}

void UbevAgent::plan() { plan_ = plan_ubev_nonstationary(counters_, delta_); }

ActionIndex UbevAgent::act(std::size_t t, StateIndex s, Rng&) const {
    return regretlab::act(plan_, t, s);
}

void UbevAgent::observe(std::span<const Transition> trajectory) {
    update_counters(counters_, trajectory);
    update_counters(pooled_, trajectory, counters_.horizon());
}

UniformAgent::UniformAgent(std::size_t horizon, std::size_t num_states, std::size_t num_actions)
    : H_(horizon), A_(num_actions), counters_(num_states, num_actions) {}

ActionIndex UniformAgent::act(std::size_t, StateIndex, Rng& rng) const {
    return static_cast<ActionIndex>(uniform01(rng) * static_cast<double>(A_));
}

void UniformAgent::observe(std::span<const Transition> trajectory) {
    update_counters(counters_, trajectory, H_);
}

OracleAgent::OracleAgent(const EpisodicMDP& mdp)
    : H_(mdp.horizon()), solution_(value_iteration(mdp)),
      counters_(mdp.num_states(), mdp.num_actions()) {}

ActionIndex OracleAgent::act(std::size_t t, StateIndex s, Rng&) const {
    check_step(solution_.policy, t, s);
    return solution_.policy(t, s);
}

void OracleAgent::observe(std::span<const Transition> trajectory) {
    update_counters(counters_, trajectory, H_);
}

std::unique_ptr<EpisodicAgent> make_episodic_agent(const AgentOptions& options,
                                                   const EpisodicMDP& mdp) {
    const std::size_t H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
    switch (options.kind) {
        case AgentKind::ubev_s:
            return std::make_unique<UbevSAgent>(S, A, UbevParams{H, options.delta, options.phi_plus_mode});
        case AgentKind::ubev: return std::make_unique<UbevAgent>(H, S, A, options.delta);
        case AgentKind::uniform: return std::make_unique<UniformAgent>(H, S, A);
        case AgentKind::oracle: return std::make_unique<OracleAgent>(mdp);
        case AgentKind::ucrl: break;
    }
    throw std::invalid_argument("make_episodic_agent: ucrl is not an episodic agent");
}

}  // namespace regretlab

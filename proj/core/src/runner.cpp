#include "regretlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "regretlab/agents.hpp"
#include "regretlab/diagnostics.hpp"
#include "regretlab/env_gen.hpp"
#include "regretlab/rng.hpp"
#include "regretlab/ucrl.hpp"

namespace regretlab {

namespace {

bool should_log(std::uint64_t k, std::uint64_t last, std::uint64_t every) {
    return k % every == 0 || k == last;
}

}  // namespace

RegretTrace run_episode_loop(const RunConfig& config, const EpisodicMDP& mdp, std::size_t trial,
                             std::uint64_t seed) {
    const std::size_t H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
    const std::uint64_t K = config.episodes();
    const bool diagnostics = config.output.diagnostics_on;

    auto agent = make_episodic_agent(
        AgentOptions{config.agent.kind, config.agent.delta, config.agent.phi_plus_mode}, mdp);
    const Solution optimal = value_iteration(mdp);
    const ValueTable uniform_values = config.agent.kind == AgentKind::uniform
                                          ? policy_evaluation(action_averaged(mdp), Policy(H, S, 0))
                                          : ValueTable();

    Rng rng(seed);
    RegretTrace trace{trial, seed, 0, {}};
    trace.rows.reserve(K / config.output.log_every + 1);
    std::vector<Transition> trajectory(H);
    std::vector<double> cumulative_w(S * A, 0.0);
    Policy evaluated_policy;
    ValueTable evaluated_values;
    double cumulative = 0.0;

    for (std::uint64_t k = 1; k <= K; ++k) {
        agent->plan();
        const Policy* pi = agent->policy();

        StateIndex s = sample_categorical(mdp.initial(), rng);
        const StateIndex s1 = s;
        for (std::size_t t = 1; t <= H; ++t) {
            const ActionIndex a = agent->act(t, s, rng);
            const auto outcome = sample_step(mdp, s, a, rng);
            trajectory[t - 1] = {s, a, outcome.reward, outcome.next_state};
            s = outcome.next_state;
        }
        trace.env_steps += H;

        double value;
        if (pi != nullptr) {
            if (!(*pi == evaluated_policy)) {
                evaluated_policy = *pi;
                evaluated_values = policy_evaluation(mdp, *pi);
            }
            value = evaluated_values(1, s1);
        } else {
            value = uniform_values(1, s1);
        }
        const double regret = optimal.values(1, s1) - value;
        cumulative += regret;

        TraceRow row;
        row.k = k;
        row.t_cumulative = k * H;
        row.per_episode_regret = regret;
        row.cumulative_regret = cumulative;
        row.rng_vtilde_t1 = std::numeric_limits<double>::quiet_NaN();

        if (diagnostics && pi != nullptr) {
            const auto& counters = agent->counters();
            if (const ValueTable* vt = agent->v_tilde()) {
                row.optimism_violation = check_optimism(*vt, optimal.values) > 0;
                row.first_step_violation = check_optimism(*vt, optimal.values, 1) > 0;
                row.rng_vtilde_t1 = range(vt->step(1));
            }
            row.min_visit_under_policy = min_visit_under_policy(counters, *pi);
            row.good_episode = classify_good_episode(counters, cumulative_w, *pi);
            row.fn_event = fn_event(counters, cumulative_w, H, config.agent.delta);
            row.good_set_size = good_set_membership(cumulative_w, H, S, A, config.agent.delta).size();
            occupancy(mdp, *pi).accumulate_into(cumulative_w);
        }

        agent->observe(trajectory);
        if (should_log(k, K, config.output.log_every)) trace.rows.push_back(row);
    }
    return trace;
}

RegretTrace run_episode_loop(const RunConfig& config) {
    const auto mdp = make_env(config.env);
    return config.episodic() ? run_episode_loop(config, mdp, 0, trial_seed(config.run.master_seed, 0))
                             : run_ucrl_loop(config, mdp, 0, trial_seed(config.run.master_seed, 0));
}

RegretTrace run_ucrl_loop(const RunConfig& config, const EpisodicMDP& mdp, std::size_t trial,
                          std::uint64_t seed) {
    const std::uint64_t T = config.steps();
    const double rho_star = optimal_gain(mdp);
    const UcrlOptions options{config.agent.delta, config.agent.known_rewards};

    UcrlState state(mdp.num_states(), mdp.num_actions());
    Rng rng(seed);
    RegretTrace trace{trial, seed, 0, {}};

    double cumulative = 0.0;
    TraceRow row;
    for (std::uint64_t step = 1; step <= T; ++step) {
        const auto log = ucrl_step(state, mdp, rng, options);
        if (log.planned) {
            row = TraceRow{};
            row.k = state.episodes();
            row.evi_iterations = log.evi_iterations;
            row.rng_vtilde_t1 = std::numeric_limits<double>::quiet_NaN();
        }
        const double regret = rho_star - mdp.reward(log.s, log.a);
        row.per_episode_regret += regret;
        cumulative += regret;
        if (log.episode_closed || step == T) {
            row.t_cumulative = step;
            row.cumulative_regret = cumulative;
            if (should_log(row.k, std::numeric_limits<std::uint64_t>::max(), config.output.log_every) ||
                step == T) {
                trace.rows.push_back(row);
            }
        }
    }
    trace.env_steps = state.t();
    return trace;
}

std::vector<RegretTrace> run_trials(const RunConfig& config, const EpisodicMDP& mdp) {
    const std::size_t trials = config.run.trials;
    std::vector<RegretTrace> results(trials);
    const std::size_t workers = std::min(resolve_parallelism(config), trials);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= trials) return;
            try {
                const auto seed = trial_seed(config.run.master_seed, i);
                results[i] = config.episodic() ? run_episode_loop(config, mdp, i, seed)
                                               : run_ucrl_loop(config, mdp, i, seed);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return results;
}

std::vector<RegretTrace> run_trials(const RunConfig& config) {
    return run_trials(config, make_env(config.env));
}

}  // namespace regretlab

#include <benchmark/benchmark.h>

#include "regretlab/env_gen.hpp"
#include "regretlab/runner.hpp"
#include "regretlab/ubev.hpp"
#include "regretlab/ucrl.hpp"

namespace {

using namespace regretlab;

EpisodicMDP fixture(std::size_t S, std::size_t A, std::size_t H) {
    EnvSpec spec;
    spec.kind = EnvKind::random_mdp;
    spec.S = S;
    spec.A = A;
    spec.H = H;
    spec.seed = 1;
    return make_random_mdp(spec);
}

AgentCounters filled_counters(const EpisodicMDP& mdp, std::size_t episodes) {
    AgentCounters c(mdp.num_states(), mdp.num_actions());
    Rng rng(2);
    std::vector<Transition> traj(mdp.horizon());
    for (std::size_t k = 0; k < episodes; ++k) {
        StateIndex s = sample_categorical(mdp.initial(), rng);
        for (auto& step : traj) {
            const auto a = static_cast<ActionIndex>(rng() % mdp.num_actions());
            const auto out = sample_step(mdp, s, a, rng);
            step = {s, a, out.reward, out.next_state};
            s = out.next_state;
        }
        update_counters(c, traj, mdp.horizon());
    }
    return c;
}

void BM_PlanUbevs(benchmark::State& state) {
    const auto S = static_cast<std::size_t>(state.range(0));
    const auto mdp = fixture(S, 4, 10);
    const auto counters = filled_counters(mdp, 200);
    for (auto _ : state) benchmark::DoNotOptimize(plan_ubevs(counters, {10, 0.1, PhiPlusMode::per_episode}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PlanUbevs)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_ValueIteration(benchmark::State& state) {
    const auto mdp = fixture(static_cast<std::size_t>(state.range(0)), 4, 10);
    for (auto _ : state) benchmark::DoNotOptimize(value_iteration(mdp));
}
BENCHMARK(BM_ValueIteration)->RangeMultiplier(2)->Range(4, 64);

void BM_ExtendedValueIteration(benchmark::State& state) {
    const auto S = static_cast<std::size_t>(state.range(0));
    const auto mdp = fixture(S, 3, 1);
    UcrlState st(S, 3);
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) ucrl_step(st, mdp, rng, {});
    const auto widths = confidence_widths(st, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(extended_value_iteration(st, widths, 1e-2));
}
BENCHMARK(BM_ExtendedValueIteration)->Arg(4)->Arg(8)->Arg(16);

void BM_EpisodeLoop(benchmark::State& state) {
    RunConfig cfg;
    cfg.env.kind = EnvKind::contextual;
    cfg.env.S = 5;
    cfg.env.A = 4;
    cfg.env.H = 5;
    cfg.env.reward_gap = 0.2;
    cfg.agent.kind = AgentKind::ubev_s;
    cfg.run.episodes = 1000;
    cfg.output.diagnostics_on = state.range(0) != 0;
    const auto mdp = make_env(cfg.env);
    for (auto _ : state) benchmark::DoNotOptimize(run_episode_loop(cfg, mdp, 0, 7));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_EpisodeLoop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

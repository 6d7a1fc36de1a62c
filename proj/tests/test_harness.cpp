#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "regretlab/analysis.hpp"
#include "regretlab/config.hpp"
#include "regretlab/diagnostics.hpp"
#include "regretlab/runner.hpp"
#include "regretlab/trace.hpp"
#include "test_util.hpp"

namespace regretlab {
namespace {

RunConfig episodic_config(AgentKind kind, std::size_t S, std::size_t A, std::size_t H, std::uint64_t K) {
    RunConfig c;
    c.env.kind = EnvKind::contextual;
    c.env.S = S;
    c.env.A = A;
    c.env.H = H;
    c.env.reward_gap = 0.2;
    c.env.seed = 11;
    c.agent.kind = kind;
    c.run.episodes = K;
    c.run.master_seed = 5;
    return c;
}

bool same_trace(const RegretTrace& a, const RegretTrace& b) {
    std::ostringstream x, y;
    write_trace_csv(x, a);
    write_trace_csv(y, b);
    return a.seed == b.seed && a.env_steps == b.env_steps && x.str() == y.str();
}

TEST(RunEpisodeLoop, OracleHasZeroRegret) {
    auto cfg = episodic_config(AgentKind::oracle, 4, 3, 5, 300);
    cfg.env.kind = EnvKind::random_mdp;
    const auto tr = run_episode_loop(cfg);
    ASSERT_EQ(tr.rows.size(), 300u);
    for (const auto& row : tr.rows) EXPECT_NEAR(row.per_episode_regret, 0.0, 1e-12);
    EXPECT_NEAR(tr.rows.back().cumulative_regret, 0.0, 1e-10);
}

TEST(RunEpisodeLoop, UniformAgentMatchesCompletionAverage) {
    // S = 1: the uniform policy's value is the mean over all A^H deterministic
    // action sequences.
    const std::size_t A = 3, H = 3;
    auto cfg = episodic_config(AgentKind::uniform, 1, A, H, 20);
    const auto mdp = make_env(cfg.env);
    double mean_value = 0.0;
    std::size_t count = 0;
    for (std::size_t code = 0; code < 27; ++code) {
        Policy pi(H, 1);
        std::size_t c = code;
        for (std::size_t t = 1; t <= H; ++t, c /= A) pi.at(t, 0) = c % A;
        mean_value += testing::forward_value(mdp, pi, 1, 0);
        ++count;
    }
    mean_value /= static_cast<double>(count);
    const double expected = value_iteration(mdp).values(1, 0) - mean_value;
    const auto tr = run_episode_loop(cfg, mdp, 0, 3);
    for (const auto& row : tr.rows) EXPECT_NEAR(row.per_episode_regret, expected, 1e-12);
}

TEST(RunEpisodeLoop, UniformAgentOnContexts) {
    // Per-episode regret = Σ_t E_{s ~ dist_t}[max_a r - mean_a r], with dist_1 = p0
    // and dist_t = μ afterwards on a contextual instance.
    auto cfg = episodic_config(AgentKind::uniform, 4, 3, 4, 50);
    const auto mdp = make_env(cfg.env);
    const auto& mu = mdp.metadata()->mu;
    double gap = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
        double best = 0.0, avg = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            best = std::max(best, mdp.reward(s, a));
            avg += mdp.reward(s, a) / 3.0;
        }
        gap += mu[s] * (best - avg);
    }
    const auto tr = run_episode_loop(cfg, mdp, 0, 9);
    double total = 0.0;
    for (const auto& row : tr.rows) {
        EXPECT_GE(row.per_episode_regret, -1e-9);
        total += row.per_episode_regret;
    }
    // Episode regrets depend on s1 ~ μ; their mean concentrates around 4·gap.
    EXPECT_NEAR(total / 50.0, 4.0 * gap, 0.5);
}

TEST(RunEpisodeLoop, StepConservationAndLogging) {
    auto cfg = episodic_config(AgentKind::ubev_s, 3, 2, 4, 103);
    cfg.output.log_every = 10;
    const auto tr = run_episode_loop(cfg);
    EXPECT_EQ(tr.env_steps, 103u * 4u);
    ASSERT_EQ(tr.rows.size(), 11u);
    EXPECT_EQ(tr.rows.front().k, 10u);
    EXPECT_EQ(tr.rows.back().k, 103u);
    EXPECT_EQ(tr.rows.back().t_cumulative, 412u);
}

TEST(RunEpisodeLoop, RegretIsNonnegativeForLearners) {
    for (auto kind : {AgentKind::ubev_s, AgentKind::ubev, AgentKind::uniform}) {
        auto cfg = episodic_config(kind, 3, 3, 4, 200);
        cfg.env.kind = EnvKind::random_mdp;
        cfg.output.diagnostics_on = true;
        const auto tr = run_episode_loop(cfg);
        double prev = 0.0;
        for (const auto& row : tr.rows) {
            EXPECT_GE(row.per_episode_regret, -1e-9);
            EXPECT_GE(row.cumulative_regret, prev - 1e-9);
            prev = row.cumulative_regret;
        }
    }
}

TEST(RunEpisodeLoop, DiagnosticsDoNotChangeRegret) {
    auto cfg = episodic_config(AgentKind::ubev_s, 3, 2, 3, 150);
    const auto plain = run_episode_loop(cfg);
    cfg.output.diagnostics_on = true;
    const auto diag = run_episode_loop(cfg);
    ASSERT_EQ(plain.rows.size(), diag.rows.size());
    for (std::size_t i = 0; i < plain.rows.size(); ++i) {
        EXPECT_EQ(plain.rows[i].cumulative_regret, diag.rows[i].cumulative_regret);
    }
    EXPECT_TRUE(diag.rows.front().good_episode);
    EXPECT_FALSE(diag.rows.front().fn_event);
    EXPECT_TRUE(std::isnan(plain.rows.front().rng_vtilde_t1));
    EXPECT_FALSE(std::isnan(diag.rows.front().rng_vtilde_t1));
}

TEST(RunEpisodeLoop, SublinearOnContextFixture) {
    auto cfg = episodic_config(AgentKind::ubev_s, 5, 4, 5, 8000);
    cfg.env.seed = 2024;
    const auto tr = run_episode_loop(cfg);
    const double half = tr.rows[tr.rows.size() / 2 - 1].cumulative_regret;
    const double full = tr.rows.back().cumulative_regret;
    EXPECT_LE(full / half, 1.8);
}

TEST(RunEpisodeLoop, RangeMarginSettlesOnContextFixture) {
    auto cfg = episodic_config(AgentKind::ubev_s, 3, 2, 3, 6000);
    cfg.output.diagnostics_on = true;
    const auto tr = run_episode_loop(cfg);
    std::vector<double> margin;
    for (std::size_t i = tr.rows.size() / 2; i < tr.rows.size(); ++i) {
        const auto& row = tr.rows[i];
        margin.push_back((row.rng_vtilde_t1 - 1.0) * std::sqrt(static_cast<double>(row.min_visit_under_policy)) /
                         (3.0 * std::sqrt(3.0)));
        if (row.min_visit_under_policy > 48 * 48 * 3) EXPECT_LE(row.rng_vtilde_t1, 2.0);
    }
    EXPECT_LE(kendall_tau(margin), 0.0);
}

TEST(RunUcrlLoop, ConservationAndEpisodes) {
    RunConfig cfg = episodic_config(AgentKind::ucrl, 4, 3, 1, 1);
    cfg.run.episodes.reset();
    cfg.run.steps = 5000;
    const auto tr = run_episode_loop(cfg);
    EXPECT_EQ(tr.env_steps, 5000u);
    EXPECT_EQ(tr.rows.back().t_cumulative, 5000u);
    for (std::size_t i = 1; i < tr.rows.size(); ++i) EXPECT_EQ(tr.rows[i].k, tr.rows[i - 1].k + 1);
    EXPECT_LE(static_cast<double>(tr.rows.back().k), 12.0 * std::log2(8.0 * 5000 / 12.0));
}

TEST(RunTrials, SingleTrialEqualsEpisodeLoop) {
    const auto cfg = episodic_config(AgentKind::ubev_s, 3, 2, 4, 120);
    const auto trials = run_trials(cfg);
    ASSERT_EQ(trials.size(), 1u);
    EXPECT_TRUE(same_trace(trials[0], run_episode_loop(cfg)));
}

TEST(RunTrials, DeterministicAcrossParallelism) {
    for (auto kind : {AgentKind::ubev_s, AgentKind::ubev, AgentKind::ucrl}) {
        auto cfg = episodic_config(kind, 3, 2, 4, 150);
        if (kind == AgentKind::ucrl) {
            cfg.run.episodes.reset();
            cfg.run.steps = 600;
        }
        cfg.run.trials = 8;
        cfg.output.diagnostics_on = true;
        cfg.run.parallelism = 1;
        const auto serial = run_trials(cfg);
        cfg.run.parallelism = 8;
        const auto parallel = run_trials(cfg);
        const auto again = run_trials(cfg);
        ASSERT_EQ(serial.size(), 8u);
        for (std::size_t i = 0; i < 8; ++i) {
            EXPECT_EQ(serial[i].seed, trial_seed(5, i));
            EXPECT_TRUE(same_trace(serial[i], parallel[i]));
            EXPECT_TRUE(same_trace(parallel[i], again[i]));
        }
        EXPECT_FALSE(same_trace(serial[0], serial[1]));
    }
}

TEST(TrialSeed, DocumentedMixing) {
    // splitmix64 finalizer applied to master + (i + 1) * golden gamma.
    auto mix = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    for (std::uint64_t m : {0ULL, 1ULL, 12345ULL, ~0ULL}) {
        for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(trial_seed(m, i), mix(m + (i + 1) * 0x9E3779B97F4A7C15ULL));
    }
}

std::vector<double> grid(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = 10.0 * static_cast<double>(i + 1);
    return t;
}

TEST(FitLogLog, ExactSquareRoot) {
    const auto t = grid(200);
    std::vector<double> y;
    for (double x : t) y.push_back(3.0 * std::sqrt(x));
    const auto fit = fit_loglog(t, y, 0.5);
    EXPECT_NEAR(fit.slope, 0.5, 1e-9);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);
    EXPECT_EQ(fit.points, 100u);
}

TEST(FitLogLog, Linear) {
    const auto t = grid(100);
    std::vector<double> y;
    for (double x : t) y.push_back(3.0 * x);
    EXPECT_NEAR(fit_loglog(t, y, 0.0).slope, 1.0, 1e-9);
}

TEST(FitLogLog, NoisySquareRoot) {
    const auto t = grid(400);
    Rng rng(77);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> y;
    for (double x : t) y.push_back(3.0 * std::sqrt(x) * (1.0 + noise(rng)));
    const auto fit = fit_loglog(t, y, 0.5);
    EXPECT_GE(fit.slope, 0.48);
    EXPECT_LE(fit.slope, 0.52);
    EXPECT_GT(fit.stderr_slope, 0.0);
}

TEST(FitLogLog, SkipsNonpositiveAndRejectsShortInput) {
    auto t = grid(60);
    std::vector<double> y;
    for (double x : t) y.push_back(std::sqrt(x));
    y[40] = 0.0;
    y[41] = -1.0;
    const auto fit = fit_loglog(t, y, 0.5);
    EXPECT_EQ(fit.skipped, 2u);
    EXPECT_EQ(fit.points, 28u);
    EXPECT_NEAR(fit.slope, 0.5, 1e-9);
    const auto short_t = grid(30);
    EXPECT_THROW(fit_loglog(short_t, std::vector<double>(30, 1.0), 0.5), std::invalid_argument);
    EXPECT_THROW(fit_loglog(t, y, 1.0), std::invalid_argument);
}

TEST(KendallTau, Extremes) {
    EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{1, 2, 3, 4}), 1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{4, 3, 2, 1}), -1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{2, 2, 2}), 0.0);
    EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{1}), 0.0);
}

TEST(AverageTraces, RowwiseMean) {
    RegretTrace a{0, 1, 4, {TraceRow{}, TraceRow{}}}, b = a;
    a.rows[0].cumulative_regret = 1.0;
    b.rows[0].cumulative_regret = 3.0;
    a.rows[1].per_episode_regret = 2.0;
    const std::vector<RegretTrace> both = {a, b};
    const auto avg = average_traces(both);
    EXPECT_DOUBLE_EQ(avg.rows[0].cumulative_regret, 2.0);
    EXPECT_DOUBLE_EQ(avg.rows[1].per_episode_regret, 1.0);
}

TEST(HSweep, RowLayoutAndMatchedSteps) {
    auto cfg = episodic_config(AgentKind::ubev_s, 3, 2, 4, 1);
    cfg.run.episodes.reset();
    cfg.run.steps = 800;
    cfg.run.trials = 2;
    const std::vector<std::size_t> Hs = {2, 4, 8};
    std::size_t sink_calls = 0;
    const auto table = h_sweep(cfg, Hs, [&](const RunConfig& c, const std::vector<RegretTrace>& traces) {
        ++sink_calls;
        EXPECT_EQ(traces.size(), 2u);
        EXPECT_EQ(traces[0].env_steps, 800u);
        EXPECT_EQ(c.episodes() * c.env.H, 800u);
    });
    ASSERT_EQ(table.rows.size(), Hs.size() * 2);
    EXPECT_EQ(sink_calls, 6u);
    EXPECT_EQ(table.rows[0].agent, AgentKind::ubev_s);
    EXPECT_EQ(table.rows[1].agent, AgentKind::ubev);
    EXPECT_EQ(table.at(AgentKind::ubev, 8).episodes, 100u);
    EXPECT_DOUBLE_EQ(table.ratio(AgentKind::ubev_s, 8, 2),
                     table.at(AgentKind::ubev_s, 8).mean_regret / table.at(AgentKind::ubev_s, 2).mean_regret);
}

TEST(HSweep, UnitHorizonAgentsCoincide) {
    auto cfg = episodic_config(AgentKind::ubev_s, 4, 3, 1, 1);
    cfg.run.episodes.reset();
    cfg.run.steps = 2000;
    cfg.run.trials = 3;
    const std::vector<std::size_t> Hs = {1};
    const auto table = h_sweep(cfg, Hs);
    EXPECT_EQ(table.at(AgentKind::ubev_s, 1).mean_regret, table.at(AgentKind::ubev, 1).mean_regret);
}

constexpr const char* kFullConfig = R"({
  "env": {"kind": "contextual", "S": 5, "A": 4, "H": 5, "reward_gap": 0.2, "seed": 3},
  "agent": {"kind": "ubev_s", "delta": 0.1, "phi_plus_mode": "persistent"},
  "run": {"episodes": 100, "trials": 4, "master_seed": 9, "parallelism": 2},
  "output": {"dir": "x", "format": "json", "log_every": 5, "diagnostics_on": true}
})";

TEST(Config, ParsesEveryField) {
    const auto c = parse_run_config(kFullConfig);
    EXPECT_EQ(c.env.kind, EnvKind::contextual);
    EXPECT_EQ(c.env.S, 5u);
    EXPECT_EQ(c.env.reward_gap, 0.2);
    EXPECT_EQ(c.agent.phi_plus_mode, PhiPlusMode::persistent);
    EXPECT_EQ(c.run.episodes, 100u);
    EXPECT_EQ(c.steps(), 500u);
    EXPECT_EQ(c.run.parallelism, 2u);
    EXPECT_EQ(c.output.format, TraceFormat::json);
    EXPECT_TRUE(c.output.diagnostics_on);
}

TEST(Config, JsonRoundTrip) {
    const auto c = parse_run_config(kFullConfig);
    EXPECT_EQ(to_json(parse_run_config(to_json(c))), to_json(c));
}

void expect_error(const std::string& text, const std::string& path) {
    try {
        parse_run_config(text);
        ADD_FAILURE() << "accepted: " << text;
    } catch (const ValidationError& e) {
        EXPECT_EQ(std::string(e.what()).rfind(path, 0), 0u) << e.what();
    }
}

TEST(Config, RejectsWithFieldPaths) {
    const std::string env = R"("env": {"kind": "contextual", "S": 3, "A": 2, "H": 4})";
    const std::string agent = R"("agent": {"kind": "ubev_s"})";
    const std::string run = R"("run": {"episodes": 10})";
    expect_error("{" + env + "," + agent + "," + run + R"(, "extra": 1})", "extra");
    expect_error(R"({"env": {"kind": "contextual", "S": 3, "A": 2, "H": 4, "bogus": 1},)" + agent + "," + run + "}",
                 "env.bogus");
    expect_error("{" + env + "," + agent + "}", "run");
    expect_error("{" + env + "," + agent + R"(, "run": {"episodes": 1, "steps": 4}})", "run");
    expect_error("{" + env + R"(, "agent": {"kind": "ucrl"},)" + run + "}", "run.steps");
    expect_error("{" + env + R"(, "agent": {"kind": "ubev_s", "known_rewards": true},)" + run + "}",
                 "agent.known_rewards");
    expect_error("{" + env + R"(, "agent": {"kind": "ubev_s", "delta": 0},)" + run + "}", "agent.delta");
    expect_error("{" + env + R"(, "agent": {"kind": "nope"},)" + run + "}", "agent.kind");
    expect_error(R"({"env": {"kind": "mab", "S": 2, "A": 2, "H": 1},)" + agent + "," + run + "}", "env.S");
    expect_error(R"({"env": {"kind": "contextual", "A": 2, "H": 4},)" + agent + "," + run + "}", "env.S");
    expect_error("{" + env + "," + agent + R"(, "run": {"episodes": -3}})", "run.episodes");
    expect_error("not json", "");
}

TEST(Config, MabDefaultsToOneState) {
    const auto c = parse_run_config(
        R"({"env": {"kind": "mab", "A": 3, "H": 1}, "agent": {"kind": "ubev_s"}, "run": {"steps": 10}})");
    EXPECT_EQ(c.env.S, 1u);
    EXPECT_EQ(c.episodes(), 10u);
}

}  // namespace
}  // namespace regretlab

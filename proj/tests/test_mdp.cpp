#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "regretlab/mdp.hpp"
#include "regretlab/mdp_io.hpp"
#include "test_util.hpp"

namespace regretlab {
namespace {

using testing::contextual;
using testing::forward_value;
using testing::random_mdp;
using testing::random_policy;

// Every deterministic time-dependent policy, A^(S·H) of them.
std::vector<Policy> all_policies(std::size_t H, std::size_t S, std::size_t A) {
    const std::size_t cells = H * S;
    std::size_t count = 1;
    for (std::size_t i = 0; i < cells; ++i) count *= A;
    std::vector<Policy> out;
    out.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        Policy pi(H, S);
        std::size_t c = code;
        for (std::size_t t = 1; t <= H; ++t) {
            for (std::size_t s = 0; s < S; ++s) {
                pi.at(t, s) = c % A;
                c /= A;
            }
        }
        out.push_back(pi);
    }
    return out;
}

TEST(ValueIteration, SingleStepIsMaxReward) {
    const auto mdp = random_mdp(4, 3, 1, 11);
    const auto sol = value_iteration(mdp);
    for (std::size_t s = 0; s < 4; ++s) {
        double best = 0.0;
        for (std::size_t a = 0; a < 3; ++a) best = std::max(best, mdp.reward(s, a));
        EXPECT_EQ(sol.values(1, s), best);
        EXPECT_EQ(sol.values(2, s), 0.0);
    }
}

TEST(ValueIteration, MatchesBruteForceEnumeration) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto mdp = random_mdp(2, 2, 3, 100 + seed);
        const auto sol = value_iteration(mdp);
        const auto policies = all_policies(3, 2, 2);
        ASSERT_EQ(policies.size(), 64u);
        for (std::size_t t = 1; t <= 3; ++t) {
            for (std::size_t s = 0; s < 2; ++s) {
                double best = -1.0;
                for (const auto& pi : policies) best = std::max(best, forward_value(mdp, pi, t, s));
                EXPECT_NEAR(sol.values(t, s), best, 1e-12) << "seed " << seed << " t " << t << " s " << s;
            }
        }
    }
}

TEST(ValueIteration, TiesGoToLowestAction) {
    const std::vector<double> p(2 * 3 * 2, 0.5);
    const std::vector<double> r = {0.3, 0.7, 0.7, 0.2, 0.2, 0.2};
    const EpisodicMDP mdp(2, 3, 2, p, r, {0.5, 0.5});
    const auto sol = value_iteration(mdp);
    EXPECT_EQ(sol.policy(1, 0), 1u);
    EXPECT_EQ(sol.policy(2, 1), 0u);
}

TEST(ValueIteration, ContextualRangeAtMostOne) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto mdp = contextual(2 + seed % 5, 2 + seed % 3, 2 + seed % 9, seed);
        const auto sol = value_iteration(mdp);
        for (std::size_t t = 1; t <= mdp.horizon(); ++t) {
            EXPECT_LE(range(sol.values.step(t)), 1.0 + 1e-12);
        }
    }
}

TEST(ValueIteration, DominatesRandomPolicies) {
    Rng rng(5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto mdp = random_mdp(4, 3, 5, 200 + seed);
        const auto sol = value_iteration(mdp);
        for (int i = 0; i < 100; ++i) {
            const auto v = policy_evaluation(mdp, random_policy(5, 4, 3, rng));
            for (std::size_t t = 1; t <= 5; ++t) {
                for (std::size_t s = 0; s < 4; ++s) EXPECT_GE(sol.values(t, s), v(t, s) - 1e-12);
            }
        }
    }
}

TEST(ValueIteration, MonotoneInRewards) {
    Rng rng(17);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto mdp = random_mdp(3, 3, 4, 300 + seed);
        auto r = mdp.rewards();
        const std::size_t i = rng() % r.size();
        r[i] = std::min(1.0, r[i] + 0.3 * uniform01(rng));
        const EpisodicMDP raised(3, 3, 4, mdp.transitions(), r, {mdp.initial().begin(), mdp.initial().end()});
        const auto before = value_iteration(mdp).values;
        const auto after = value_iteration(raised).values;
        for (std::size_t t = 1; t <= 4; ++t) {
            for (std::size_t s = 0; s < 3; ++s) EXPECT_GE(after(t, s), before(t, s));
        }
    }
}

TEST(PolicyEvaluation, GreedyPolicyAttainsOptimum) {
    const auto mdp = random_mdp(5, 4, 6, 7);
    const auto sol = value_iteration(mdp);
    const auto v = policy_evaluation(mdp, sol.policy);
    for (std::size_t t = 1; t <= 7; ++t) {
        for (std::size_t s = 0; s < 5; ++s) EXPECT_NEAR(v(t, s), sol.values(t, s), 1e-12);
    }
}

TEST(PolicyEvaluation, ContextualAlwaysFirstActionClosedForm) {
    const auto mdp = contextual(4, 3, 6, 21);
    const auto& mu = mdp.metadata()->mu;
    double mean_r0 = 0.0;
    for (std::size_t s = 0; s < 4; ++s) mean_r0 += mu[s] * mdp.reward(s, 0);
    const auto v = policy_evaluation(mdp, Policy(6, 4, 0));
    for (std::size_t s = 0; s < 4; ++s) {
        EXPECT_NEAR(v(1, s), mdp.reward(s, 0) + 5.0 * mean_r0, 1e-12);
    }
}

TEST(PolicyEvaluation, ZeroRewardGivesZero) {
    const auto base = random_mdp(3, 2, 4, 9);
    const EpisodicMDP mdp(3, 2, 4, base.transitions(), std::vector<double>(6, 0.0),
                          {base.initial().begin(), base.initial().end()});
    Rng rng(1);
    const auto v = policy_evaluation(mdp, random_policy(4, 3, 2, rng));
    for (std::size_t t = 1; t <= 5; ++t) {
        for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(v(t, s), 0.0);
    }
}

TEST(PolicyEvaluation, RejectsOutOfRangeAction) {
    const auto mdp = random_mdp(2, 2, 2, 1);
    EXPECT_THROW(policy_evaluation(mdp, Policy(2, 2, 5)), std::invalid_argument);
    EXPECT_THROW(policy_evaluation(mdp, Policy(3, 2, 0)), std::invalid_argument);
}

TEST(ActionAveraged, MatchesAverageOverDeterministicCompletions) {
    // S = 1: the uniform policy's value is the mean over all A^H action sequences.
    const auto mdp = contextual(1, 3, 4, 33);
    const auto v_uniform = policy_evaluation(action_averaged(mdp), Policy(4, 1, 0));
    const auto policies = all_policies(4, 1, 3);
    double sum = 0.0;
    for (const auto& pi : policies) sum += forward_value(mdp, pi, 1, 0);
    EXPECT_NEAR(v_uniform(1, 0), sum / static_cast<double>(policies.size()), 1e-12);
}

TEST(Occupancy, DeterministicChainHasUnitMass) {
    // 0 -> 1 -> 2 -> 2 under every action.
    std::vector<double> p(3 * 2 * 3, 0.0);
    for (std::size_t a = 0; a < 2; ++a) {
        p[(0 * 2 + a) * 3 + 1] = 1.0;
        p[(1 * 2 + a) * 3 + 2] = 1.0;
        p[(2 * 2 + a) * 3 + 2] = 1.0;
    }
    const EpisodicMDP mdp(3, 2, 4, p, std::vector<double>(6, 0.5), {1.0, 0.0, 0.0});
    Policy pi(4, 3, 1);
    const auto w = occupancy(mdp, pi);
    const StateIndex expected[] = {0, 1, 2, 2};
    for (std::size_t t = 1; t <= 4; ++t) {
        for (std::size_t s = 0; s < 3; ++s) {
            for (std::size_t a = 0; a < 2; ++a) {
                EXPECT_EQ(w(t, s, a), (s == expected[t - 1] && a == 1) ? 1.0 : 0.0);
            }
        }
    }
}

TEST(Occupancy, ContextualMarginalIsMu) {
    const auto mdp = contextual(5, 3, 6, 41);
    Rng rng(3);
    const auto w = occupancy(mdp, random_policy(6, 5, 3, rng));
    const auto& mu = mdp.metadata()->mu;
    for (std::size_t t = 2; t <= 6; ++t) {
        for (std::size_t s = 0; s < 5; ++s) {
            double m = 0.0;
            for (std::size_t a = 0; a < 3; ++a) m += w(t, s, a);
            EXPECT_NEAR(m, mu[s], 1e-12);
        }
    }
}

TEST(Occupancy, MassIsConserved) {
    Rng rng(8);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto mdp = random_mdp(6, 3, 8, 500 + seed, 0.3);
        const auto w = occupancy(mdp, random_policy(8, 6, 3, rng));
        for (std::size_t t = 1; t <= 8; ++t) {
            double mass = 0.0;
            for (std::size_t s = 0; s < 6; ++s) {
                for (std::size_t a = 0; a < 3; ++a) mass += w(t, s, a);
            }
            EXPECT_NEAR(mass, 1.0, 1e-10);
        }
        const auto agg = w.aggregate();
        double total = 0.0;
        for (double x : agg) total += x;
        EXPECT_NEAR(total, 8.0, 1e-9);
    }
}

TEST(Range, Basics) {
    const std::vector<double> constant(4, 2.5);
    EXPECT_EQ(range(constant), 0.0);
    const std::vector<double> unit = {0.0, 1.0};
    EXPECT_EQ(range(unit), 1.0);
    EXPECT_THROW(range(std::span<const double>{}), std::invalid_argument);
}

TEST(EpisodicMDPValidation, RowSums) {
    const std::vector<double> r(2, 0.5);
    // Within 1e-9: renormalized.
    const EpisodicMDP ok(2, 1, 1, {0.6 + 5e-10, 0.4, 0.5, 0.5 - 5e-10}, r, {0.5, 0.5});
    EXPECT_NEAR(ok.p(0, 0, 0) + ok.p(0, 0, 1), 1.0, 1e-15);
    EXPECT_NEAR(ok.p(1, 0, 0) + ok.p(1, 0, 1), 1.0, 1e-15);
    // Off by 1e-6: rejected.
    EXPECT_THROW(EpisodicMDP(1, 2, 1, {1.0 - 1e-6, 1.0}, r, {1.0}), std::invalid_argument);
    EXPECT_THROW(EpisodicMDP(2, 1, 1, {1.2, -0.2, 0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}), std::invalid_argument);
    EXPECT_THROW(EpisodicMDP(1, 2, 1, {1.0, 1.0}, {0.5, 1.5}, {1.0}), std::invalid_argument);
    EXPECT_THROW(EpisodicMDP(1, 2, 1, {1.0, 1.0}, r, {0.9}), std::invalid_argument);
    EXPECT_THROW(EpisodicMDP(1, 2, 0, {1.0, 1.0}, r, {1.0}), std::invalid_argument);
}

TEST(EpisodicMDPValidation, ContextMetadataMustMatchRows) {
    EXPECT_THROW(EpisodicMDP(2, 1, 1, {0.5, 0.5, 0.4, 0.6}, {0.1, 0.2}, {0.5, 0.5}, RewardNoise::bernoulli,
                             ContextMetadata{{0.5, 0.5}, 0.5}),
                 std::invalid_argument);
}

TEST(MdpJson, RoundTripIsExact) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto mdp = seed % 2 ? contextual(3, 2, 4, seed) : random_mdp(3, 2, 4, seed);
        const auto back = mdp_from_json(to_json(mdp));
        EXPECT_EQ(back, mdp);
        EXPECT_EQ(to_json(back), to_json(mdp));
    }
}

TEST(MdpJson, FieldOrderAndShape) {
    const EpisodicMDP mdp(1, 2, 3, {1.0, 1.0}, {0.25, 0.5}, {1.0}, RewardNoise::deterministic);
    EXPECT_EQ(to_json(mdp),
              "{\n"
              "  \"S\": 1,\n"
              "  \"A\": 2,\n"
              "  \"H\": 3,\n"
              "  \"p\": [\n    [\n      [\n        1.0\n      ],\n      [\n        1.0\n      ]\n    ]\n  ],\n"
              "  \"r\": [\n    [\n      0.25,\n      0.5\n    ]\n  ],\n"
              "  \"p0\": [\n    1.0\n  ],\n"
              "  \"reward_noise\": \"deterministic\",\n"
              "  \"metadata\": {}\n"
              "}");
}

TEST(MdpJson, RejectsMalformed) {
    EXPECT_THROW(mdp_from_json("{\"S\": 1}"), std::invalid_argument);
    EXPECT_THROW(mdp_from_json("{\"S\":1,\"A\":1,\"H\":1,\"p\":[[[0.5]]],\"r\":[[0.5]],\"p0\":[1],"
                               "\"reward_noise\":\"bernoulli\",\"metadata\":{}}"),
                 std::invalid_argument);
}

}  // namespace
}  // namespace regretlab

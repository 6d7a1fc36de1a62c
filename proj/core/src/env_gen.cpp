#include "regretlab/env_gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regretlab {

namespace {

constexpr int kMaxMuAttempts = 1'000'000;

void check_dims(const EnvSpec& spec) {
    if (spec.S == 0 || spec.A == 0 || spec.H == 0) {
        throw std::invalid_argument("EnvSpec: S, A and H must be >= 1");
    }
    if (!(spec.mu_concentration > 0.0)) {
        throw std::invalid_argument("EnvSpec: mu_concentration must be positive");
    }
    if (spec.reward_gap && !(*spec.reward_gap >= 0.0 && *spec.reward_gap <= 1.0)) {
        throw std::invalid_argument("EnvSpec: reward_gap must lie in [0,1]");
    }
}

// Rewards of one context. With a gap, a uniformly chosen arm gets
// r_best ~ U[gap, 1] and every other arm U[0, r_best - gap].
void sample_context_rewards(std::span<double> out, std::optional<double> gap, Rng& rng) {
    if (!gap) {
        for (double& x : out) x = uniform01(rng);
        return;
    }
    const std::size_t best = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(out.size()));
    const double r_best = *gap + (1.0 - *gap) * uniform01(rng);
    for (std::size_t a = 0; a < out.size(); ++a) {
        out[a] = a == best ? r_best : (r_best - *gap) * uniform01(rng);
    }
}

std::vector<double> uniform_dist(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::vector<double> random_transitions(const EnvSpec& spec, Rng& rng) {
    std::vector<double> p;
    p.reserve(spec.S * spec.A * spec.S);
    for (std::size_t sa = 0; sa < spec.S * spec.A; ++sa) {
        const auto row = sample_dirichlet(spec.S, spec.mu_concentration, rng);
        p.insert(p.end(), row.begin(), row.end());
    }
    return p;
}

}  // namespace

std::vector<double> sample_dirichlet(std::size_t n, double concentration, Rng& rng) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    std::vector<double> x(n);
    for (;;) {
        double sum = 0.0;
        for (double& xi : x) {
            xi = gamma(rng);
            sum += xi;
        }
        if (sum > 0.0 && std::isfinite(sum)) {
            for (double& xi : x) xi /= sum;
            return x;
        }
    }
}

StateIndex sample_categorical(std::span<const double> dist, Rng& rng) {
    const double u = uniform01(rng);
    double cdf = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] <= 0.0) continue;
        last_positive = i;
        cdf += dist[i];
        if (u < cdf) return i;
    }
    return last_positive;
}

EpisodicMDP make_contextual(std::span<const double> mu, std::span<const double> rewards,
                            std::size_t num_actions, std::size_t horizon, RewardNoise noise) {
    const std::size_t S = mu.size();
    if (S == 0) throw std::invalid_argument("make_contextual: empty mu");
    if (*std::min_element(mu.begin(), mu.end()) <= 0.0) {
        throw std::invalid_argument("make_contextual: mu_min must be positive");
    }
    std::vector<double> p;
    p.reserve(S * num_actions * S);
    for (std::size_t sa = 0; sa < S * num_actions; ++sa) p.insert(p.end(), mu.begin(), mu.end());
    std::vector<double> mu_vec(mu.begin(), mu.end());
    return EpisodicMDP(S, num_actions, horizon, std::move(p),
                       std::vector<double>(rewards.begin(), rewards.end()), mu_vec, noise,
                       ContextMetadata{mu_vec, 0.0});
}

EpisodicMDP make_contextual(const EnvSpec& spec) {
    check_dims(spec);
    Rng rng(spec.seed);
    const double floor = 0.5 / static_cast<double>(spec.S);
    std::vector<double> mu;
    for (int attempt = 0;; ++attempt) {
        if (attempt == kMaxMuAttempts) {
            throw std::runtime_error("make_contextual: could not sample mu with mu_min >= 0.5/S");
        }
        mu = sample_dirichlet(spec.S, spec.mu_concentration, rng);
        if (*std::min_element(mu.begin(), mu.end()) >= floor) break;
    }
    std::vector<double> r(spec.S * spec.A);
    for (std::size_t s = 0; s < spec.S; ++s) {
        sample_context_rewards({r.data() + s * spec.A, spec.A}, spec.reward_gap, rng);
    }
    return make_contextual(mu, r, spec.A, spec.H, spec.reward_noise);
}

EpisodicMDP make_random_mdp(const EnvSpec& spec) {
    check_dims(spec);
    Rng rng(spec.seed);
    auto p = random_transitions(spec, rng);
    std::vector<double> r(spec.S * spec.A);
    for (std::size_t s = 0; s < spec.S; ++s) {
        sample_context_rewards({r.data() + s * spec.A, spec.A}, spec.reward_gap, rng);
    }
    return EpisodicMDP(spec.S, spec.A, spec.H, std::move(p), std::move(r), uniform_dist(spec.S),
                       spec.reward_noise);
}

EpisodicMDP make_mab(const EnvSpec& spec) {
    if (spec.S != 1) throw std::invalid_argument("make_mab: a bandit has exactly one state (S = 1)");
    return make_contextual(spec);
}

EpisodicMDP make_max_reward_everywhere(const EnvSpec& spec) {
    check_dims(spec);
    if (!(spec.r_star > 0.0 && spec.r_star <= 1.0)) {
        throw std::invalid_argument("make_max_reward_everywhere: r_star must lie in (0,1]");
    }
    Rng rng(spec.seed);
    auto p = random_transitions(spec, rng);
    const double below = std::nextafter(spec.r_star, 0.0);
    std::vector<double> r(spec.S * spec.A);
    for (std::size_t s = 0; s < spec.S; ++s) {
        const auto best = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(spec.A));
        for (std::size_t a = 0; a < spec.A; ++a) {
            r[s * spec.A + a] = a == best ? spec.r_star : std::min(spec.r_star * uniform01(rng), below);
        }
    }
    return EpisodicMDP(spec.S, spec.A, spec.H, std::move(p), std::move(r), uniform_dist(spec.S),
                       spec.reward_noise);
}

EpisodicMDP make_env(const EnvSpec& spec) {
    switch (spec.kind) {
        case EnvKind::contextual: return make_contextual(spec);
        case EnvKind::random_mdp: return make_random_mdp(spec);
        case EnvKind::mab: return make_mab(spec);
        case EnvKind::max_reward_everywhere: return make_max_reward_everywhere(spec);
    }
    throw std::invalid_argument("make_env: unknown kind");
}

StepOutcome sample_step(const EpisodicMDP& mdp, StateIndex s, ActionIndex a, Rng& rng) {
    const double mean = mdp.reward(s, a);
    double reward = mean;
    if (mdp.noise() == RewardNoise::bernoulli) reward = uniform01(rng) < mean ? 1.0 : 0.0;
    return {reward, sample_categorical(mdp.row(s, a), rng)};
}

}  // namespace regretlab

#include "regretlab/ucrl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "regretlab/env_gen.hpp"

namespace regretlab {

UcrlState::UcrlState(std::size_t num_states, std::size_t num_actions)
    : policy(num_states, 0), S_(num_states), A_(num_actions), N_(num_states * num_actions, 0),
      Rsum_(num_states * num_actions, 0.0), Pcount_(num_states * num_actions * num_states, 0),
      v_(num_states * num_actions, 0), ep_rsum_(num_states * num_actions, 0.0),
      ep_pcount_(num_states * num_actions * num_states, 0) {}

bool UcrlState::record(StateIndex s, ActionIndex a, double reward, StateIndex next) {
    const std::size_t sa = s * A_ + a;
    ++t_;
    ++v_[sa];
    ep_rsum_[sa] += reward;
    ++ep_pcount_[sa * S_ + next];
    return v_[sa] >= std::max<std::uint64_t>(1, N_[sa]);
}

void UcrlState::close_episode() {
    for (std::size_t i = 0; i < N_.size(); ++i) {
        N_[i] += v_[i];
        Rsum_[i] += ep_rsum_[i];
    }
    for (std::size_t i = 0; i < Pcount_.size(); ++i) Pcount_[i] += ep_pcount_[i];
    std::fill(v_.begin(), v_.end(), 0);
    std::fill(ep_rsum_.begin(), ep_rsum_.end(), 0.0);
    std::fill(ep_pcount_.begin(), ep_pcount_.end(), 0);
    needs_plan_ = true;
}

void UcrlState::open_episode() {
    t_k_ = t_ + 1;
    ++episodes_;
    needs_plan_ = false;
}

ConfidenceWidths confidence_widths(const UcrlState& state, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
    const double S = static_cast<double>(state.num_states());
    const double A = static_cast<double>(state.num_actions());
    const double tk = static_cast<double>(std::max<std::uint64_t>(1, state.t_k()));
    const double reward_log = std::log(2.0 * S * A * tk / delta);
    const double trans_log = std::log(2.0 * A * tk / delta);

    ConfidenceWidths w;
    w.reward.resize(state.num_states() * state.num_actions());
    w.transition.resize(w.reward.size());
    for (std::size_t s = 0; s < state.num_states(); ++s) {
        for (std::size_t a = 0; a < state.num_actions(); ++a) {
            const double n = static_cast<double>(std::max<std::uint64_t>(1, state.N(s, a)));
            w.reward[s * state.num_actions() + a] = std::sqrt(7.0 * reward_log / (2.0 * n));
            w.transition[s * state.num_actions() + a] = std::sqrt(14.0 * S * trans_log / (2.0 * n));
        }
    }
    return w;
}

void optimistic_transition(std::span<const double> p_hat, double width,
                           std::span<const StateIndex> order, std::span<double> out) {
    std::copy(p_hat.begin(), p_hat.end(), out.begin());
    const StateIndex best = order.front();
    out[best] = std::min(1.0, p_hat[best] + width / 2.0);
    double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (std::size_t i = order.size(); i-- > 1 && total > 1.0;) {
        const StateIndex worst = order[i];
        const double others = total - out[worst];
        out[worst] = std::max(0.0, 1.0 - others);
        total = others + out[worst];
    }
}

EviResult extended_value_iteration(const UcrlState& state, const ConfidenceWidths& widths,
                                   double epsilon_stop,
                                   std::optional<std::span<const double>> known_rewards) {
    const std::size_t S = state.num_states(), A = state.num_actions();
    if (known_rewards && known_rewards->size() != S * A) {
        throw std::invalid_argument("extended_value_iteration: known rewards have wrong size");
    }

    std::vector<double> r_tilde(S * A);
    std::vector<double> p_hat(S * A * S);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            const std::size_t sa = s * A + a;
            const std::uint64_t n = state.N(s, a);
            if (known_rewards) {
                r_tilde[sa] = (*known_rewards)[sa];
            } else {
                const double r_hat = n == 0 ? 0.0 : state.Rsum(s, a) / static_cast<double>(n);
                r_tilde[sa] = std::min(1.0, r_hat + widths.reward[sa]);
            }
            for (std::size_t j = 0; j < S; ++j) {
                p_hat[sa * S + j] = n == 0 ? 1.0 / static_cast<double>(S)
                                           : static_cast<double>(state.Pcount(s, a, j)) /
                                                 static_cast<double>(n);
            }
        }
    }

    EviResult res;
    res.u.assign(S, 0.0);
    res.policy.assign(S, 0);
    std::vector<double> u_next(S), p_opt(S), diff(S);
    std::vector<StateIndex> order(S);

    for (;;) {
        std::iota(order.begin(), order.end(), StateIndex{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](StateIndex x, StateIndex y) { return res.u[x] > res.u[y]; });
        for (std::size_t s = 0; s < S; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            ActionIndex best_a = 0;
            for (std::size_t a = 0; a < A; ++a) {
                const std::size_t sa = s * A + a;
                optimistic_transition({p_hat.data() + sa * S, S}, widths.transition[sa], order, p_opt);
                double q = r_tilde[sa];
                for (std::size_t j = 0; j < S; ++j) q += p_opt[j] * res.u[j];
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            u_next[s] = best;
            res.policy[s] = best_a;
        }
        ++res.iterations;

        for (std::size_t s = 0; s < S; ++s) diff[s] = u_next[s] - res.u[s];
        const auto [lo, hi] = std::minmax_element(diff.begin(), diff.end());
        const double lo_v = *lo, hi_v = *hi;
        const double base = *std::min_element(u_next.begin(), u_next.end());
        for (std::size_t s = 0; s < S; ++s) res.u[s] = u_next[s] - base;

        if (res.iterations >= 2 && hi_v - lo_v < epsilon_stop) {
            res.rho_tilde = 0.5 * (hi_v + lo_v);
            return res;
        }
        if (res.iterations >= kEviMaxIterations) {
            throw std::runtime_error("extended_value_iteration: no convergence after " +
                                     std::to_string(kEviMaxIterations) +
                                     " iterations (span " + std::to_string(hi_v - lo_v) +
                                     "); the optimistic model may be periodic or reducible");
        }
    }
}

UcrlStepLog ucrl_step(UcrlState& state, const EpisodicMDP& mdp, Rng& rng, const UcrlOptions& options) {
    if (!state.current_state) state.current_state = sample_categorical(mdp.initial(), rng);

    UcrlStepLog log{};
    if (state.needs_plan()) {
        state.open_episode();
        const auto widths = confidence_widths(state, options.delta);
        const double eps = 1.0 / std::sqrt(static_cast<double>(state.t_k()));
        const auto evi = options.known_rewards
                             ? extended_value_iteration(state, widths, eps, std::span(mdp.rewards()))
                             : extended_value_iteration(state, widths, eps);
        state.policy = evi.policy;
        log.planned = true;
        log.evi_iterations = evi.iterations;
    }

    const StateIndex s = *state.current_state;
    const ActionIndex a = state.policy[s];
    const auto outcome = sample_step(mdp, s, a, rng);
    log.episode_closed = state.record(s, a, outcome.reward, outcome.next_state);
    if (log.episode_closed) state.close_episode();
    state.current_state = outcome.next_state;

    log.t = state.t();
    log.s = s;
    log.a = a;
    log.reward = outcome.reward;
    log.next = outcome.next_state;
    return log;
}

double optimal_gain(const EpisodicMDP& mdp, double epsilon) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions();
    if (const auto& meta = mdp.metadata()) {
        double g = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            double best = 0.0;
            for (std::size_t a = 0; a < A; ++a) best = std::max(best, mdp.reward(s, a));
            g += meta->mu[s] * best;
        }
        return g;
    }

    const auto sweeps = static_cast<std::uint64_t>(std::ceil(10.0 * static_cast<double>(S) / epsilon));
    std::vector<double> h(S, 0.0), h_next(S);
    double lo_v = 0.0, hi_v = 0.0;
    for (std::uint64_t i = 0; i < sweeps; ++i) {
        for (std::size_t s = 0; s < S; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < A; ++a) {
                const auto row = mdp.row(s, a);
                double q = mdp.reward(s, a);
                for (std::size_t j = 0; j < S; ++j) q += row[j] * h[j];
                best = std::max(best, q);
            }
            h_next[s] = best;
        }
        lo_v = std::numeric_limits<double>::infinity();
        hi_v = -lo_v;
        for (std::size_t s = 0; s < S; ++s) {
            lo_v = std::min(lo_v, h_next[s] - h[s]);
            hi_v = std::max(hi_v, h_next[s] - h[s]);
        }
        const double base = *std::min_element(h_next.begin(), h_next.end());
        for (std::size_t s = 0; s < S; ++s) h[s] = h_next[s] - base;
        if (i > 0 && hi_v - lo_v < 1e-13) break;
    }
    return 0.5 * (hi_v + lo_v);
}

}  // namespace regretlab

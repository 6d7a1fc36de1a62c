#include "regretlab/ubev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace regretlab {

double bonus_log_term(std::size_t S, std::size_t A, std::size_t H, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
    return std::log(27.0 * static_cast<double>(H) * static_cast<double>(S) *
                    static_cast<double>(A) / delta);
}

double bonus_phi_with_log(std::uint64_t n, double log_term) {
    if (n == 0) return kSaturated;
    const double nd = static_cast<double>(n);
    const double lnln = nd <= std::numbers::e ? 0.0 : std::log(std::log(nd));
    return std::sqrt((2.0 * lnln + log_term) / nd);
}

double bonus_phi(std::uint64_t n, std::size_t S, std::size_t A, std::size_t H, double delta) {
    return bonus_phi_with_log(n, bonus_log_term(S, A, H, delta));
}

void AgentCounters::record(const Transition& step) {
    const std::size_t sa = step.s * A_ + step.a;
    ++n_[sa];
    ++m_[sa * S_ + step.next];
    l_[sa] += step.reward;
}

std::uint64_t AgentCounters::total_visits() const {
    return std::accumulate(n_.begin(), n_.end(), std::uint64_t{0});
}

NonStationaryCounters::NonStationaryCounters(std::size_t horizon, std::size_t num_states,
                                             std::size_t num_actions)
    : H_(horizon), S_(num_states), A_(num_actions), n_(horizon * num_states * num_actions, 0),
      l_(horizon * num_states * num_actions, 0.0),
      m_(horizon * num_states * num_actions * num_states, 0) {}

void NonStationaryCounters::record(std::size_t t, const Transition& step) {
    const std::size_t i = idx(t, step.s, step.a);
    ++n_[i];
    ++m_[i * S_ + step.next];
    l_[i] += step.reward;
}

namespace {

struct NextStep {
    double max = 0.0;
    double rng = 0.0;
};

NextStep summarize(std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {*hi, *hi - *lo};
}

double dot_counts(std::span<const std::uint64_t> counts, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] != 0) acc += static_cast<double>(counts[j]) * v[j];
    }
    return acc;
}

}  // namespace

PlanResult plan_ubevs(const AgentCounters& counters, const UbevParams& params) {
    const std::size_t H = params.H, S = counters.num_states(), A = counters.num_actions();
    const double log_term = bonus_log_term(S, A, H, params.delta);
    const double phi_plus_scale = 4.0 * std::sqrt(static_cast<double>(S)) *
                                  static_cast<double>(H) * static_cast<double>(H);

    std::vector<double> phi(S * A);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) phi[s * A + a] = bonus_phi_with_log(counters.n(s, a), log_term);
    }

    PlanResult out{Policy(H, S), ValueTable(H, S), 0.0, std::vector<double>(H * S, 0.0)};
    double phi_plus = params.phi_plus_mode == PhiPlusMode::persistent ? counters.phi_plus : 0.0;

    for (std::size_t t = H; t >= 1; --t) {
        const auto next = out.v_tilde.step(t + 1);
        const NextStep ns = summarize(next);
        const double steps_left = static_cast<double>(H - t);
        for (std::size_t s = 0; s < S; ++s) {
            const double width = std::min(steps_left, ns.rng + phi_plus);
            double best = -std::numeric_limits<double>::infinity();
            ActionIndex best_a = 0;
            for (std::size_t a = 0; a < A; ++a) {
                const double ph = phi[s * A + a];
                double q;
                if (ph == kSaturated) {
                    q = 1.0 + ns.max;
                } else {
                    const double n = static_cast<double>(counters.n(s, a));
                    const double r_hat = counters.l(s, a) / n;
                    const double v_next = dot_counts(counters.m_row(s, a), next) / n;
                    q = std::min(1.0, r_hat + ph) + std::min(ns.max, v_next + width * ph);
                }
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            out.v_tilde.at(t, s) = best;
            out.policy.at(t, s) = best_a;
            const double ph = phi[s * A + best_a];
            out.per_state_bonus[(t - 1) * S + s] = width == 0.0 ? 0.0 : width * ph;
            phi_plus = std::max(phi_plus_scale * ph, phi_plus);
        }
    }
    out.phi_plus_after = phi_plus;
    return out;
}

PlanResult plan_ubev_nonstationary(const NonStationaryCounters& counters, double delta) {
    const std::size_t H = counters.horizon(), S = counters.num_states(), A = counters.num_actions();
    const double log_term = bonus_log_term(S, A, H, delta);

    PlanResult out{Policy(H, S), ValueTable(H, S), 0.0, std::vector<double>(H * S, 0.0)};
    for (std::size_t t = H; t >= 1; --t) {
        const auto next = out.v_tilde.step(t + 1);
        const NextStep ns = summarize(next);
        const double steps_left = static_cast<double>(H - t);
        for (std::size_t s = 0; s < S; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            ActionIndex best_a = 0;
            double best_phi = kSaturated;
            for (std::size_t a = 0; a < A; ++a) {
                const std::uint64_t count = counters.n(t, s, a);
                const double ph = bonus_phi_with_log(count, log_term);
                double q;
                if (ph == kSaturated) {
                    q = 1.0 + ns.max;
                } else {
                    const double n = static_cast<double>(count);
                    const double r_hat = counters.l(t, s, a) / n;
                    const double v_next = dot_counts(counters.m_row(t, s, a), next) / n;
                    q = std::min(1.0, r_hat + ph) + std::min(ns.max, v_next + steps_left * ph);
                }
                if (q > best) {
                    best = q;
                    best_a = a;
                    best_phi = ph;
                }
            }
            out.v_tilde.at(t, s) = best;
            out.policy.at(t, s) = best_a;
            out.per_state_bonus[(t - 1) * S + s] = steps_left == 0.0 ? 0.0 : steps_left * best_phi;
        }
    }
    return out;
}

void update_counters(AgentCounters& counters, std::span<const Transition> trajectory, std::size_t H) {
    if (trajectory.size() != H) {
        throw std::invalid_argument("update_counters: trajectory length " +
                                    std::to_string(trajectory.size()) + " != H = " + std::to_string(H));
    }
    for (const auto& step : trajectory) counters.record(step);
}

void update_counters(NonStationaryCounters& counters, std::span<const Transition> trajectory) {
    if (trajectory.size() != counters.horizon()) {
        throw std::invalid_argument("update_counters: trajectory length != H");
    }
    for (std::size_t t = 1; t <= trajectory.size(); ++t) counters.record(t, trajectory[t - 1]);
}

ActionIndex act(const PlanResult& plan, std::size_t t, StateIndex s) {
    if (t < 1 || t > plan.policy.horizon() || s >= plan.policy.num_states()) {
        throw std::out_of_range("act: (t, s) outside the policy table");
    }
    return plan.policy(t, s);
}

}  // namespace regretlab

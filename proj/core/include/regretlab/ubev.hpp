#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "regretlab/mdp.hpp"

namespace regretlab {

/// Bonus value for an unvisited pair; every downstream min-clamp treats it as +∞.
inline constexpr double kSaturated = std::numeric_limits<double>::infinity();

/// sqrt((2 ln ln max{e, n} + ln(27 H S A / δ)) / n), or kSaturated for n = 0.
/// Throws std::invalid_argument unless δ ∈ (0, 1].
double bonus_phi(std::uint64_t n, std::size_t S, std::size_t A, std::size_t H, double delta);

/// Precomputed ln(27 H S A / δ) for the hot loop.
double bonus_log_term(std::size_t S, std::size_t A, std::size_t H, double delta);
double bonus_phi_with_log(std::uint64_t n, double log_term);

struct Transition {
    StateIndex s;
    ActionIndex a;
    double reward;
    StateIndex next;
};

/// Stationary sufficient statistics: counts are pooled over all timesteps.
class AgentCounters {
public:
    AgentCounters(std::size_t num_states, std::size_t num_actions)
        : S_(num_states), A_(num_actions), n_(num_states * num_actions, 0),
          l_(num_states * num_actions, 0.0), m_(num_states * num_actions * num_states, 0) {}

    std::size_t num_states() const { return S_; }
    std::size_t num_actions() const { return A_; }

    std::uint64_t n(StateIndex s, ActionIndex a) const { return n_[s * A_ + a]; }
    double l(StateIndex s, ActionIndex a) const { return l_[s * A_ + a]; }
    std::uint64_t m(StateIndex next, StateIndex s, ActionIndex a) const {
        return m_[(s * A_ + a) * S_ + next];
    }
    std::span<const std::uint64_t> m_row(StateIndex s, ActionIndex a) const {
        return {m_.data() + (s * A_ + a) * S_, S_};
    }
    std::span<const std::uint64_t> visits() const { return n_; }

    void record(const Transition& step);

    double phi_plus = 0.0;

    std::uint64_t total_visits() const;

    bool operator==(const AgentCounters&) const = default;

private:
    std::size_t S_, A_;
    std::vector<std::uint64_t> n_;
    std::vector<double> l_;
    std::vector<std::uint64_t> m_;
};

/// Per-timestep statistics of the original (non-stationary) UBEV.
class NonStationaryCounters {
public:
    NonStationaryCounters(std::size_t horizon, std::size_t num_states, std::size_t num_actions);

    std::size_t horizon() const { return H_; }
    std::size_t num_states() const { return S_; }
    std::size_t num_actions() const { return A_; }

    std::uint64_t n(std::size_t t, StateIndex s, ActionIndex a) const { return n_[idx(t, s, a)]; }
    double l(std::size_t t, StateIndex s, ActionIndex a) const { return l_[idx(t, s, a)]; }
    std::uint64_t m(std::size_t t, StateIndex next, StateIndex s, ActionIndex a) const {
        return m_[idx(t, s, a) * S_ + next];
    }
    std::span<const std::uint64_t> m_row(std::size_t t, StateIndex s, ActionIndex a) const {
        return {m_.data() + idx(t, s, a) * S_, S_};
    }

    void record(std::size_t t, const Transition& step);

private:
    std::size_t idx(std::size_t t, StateIndex s, ActionIndex a) const {
        return ((t - 1) * S_ + s) * A_ + a;
    }
    std::size_t H_, S_, A_;
    std::vector<std::uint64_t> n_;
    std::vector<double> l_;
    std::vector<std::uint64_t> m_;
};

enum class PhiPlusMode {
    per_episode,  ///< φ⁺ restarts at 0 for every planning pass
    persistent,   ///< φ⁺ is never reset (literal pseudocode)
};

struct UbevParams {
    std::size_t H = 1;
    double delta = 0.1;
    PhiPlusMode phi_plus_mode = PhiPlusMode::per_episode;
};

struct PlanResult {
    Policy policy;
    ValueTable v_tilde;
    double phi_plus_after = 0.0;
    /// Transition bonus applied at (t, s) for the chosen action, flattened
    /// (t - 1) * S + s. kSaturated when the pair has never been visited.
    std::vector<double> per_state_bonus;

    double bonus(std::size_t t, StateIndex s) const {
        return per_state_bonus[(t - 1) * policy.num_states() + s];
    }
};

/// Optimistic backward induction of UBEV-S. For t = H..1 and every s:
///
///   Q(a)   = min{1, r̂ + φ} + min{max Ṽ_{t+1}, V̂_next + min{H - t, rng Ṽ_{t+1} + φ⁺} φ}
///   π(s,t) = argmax_a Q(a),  Ṽ_t(s) = Q(π(s,t)),  φ⁺ = max{4 √S H² φ(s, π(s,t)), φ⁺}
///
/// States are swept in index order and φ⁺ updates are visible to later states
/// of the same step. An unvisited pair gets Q = 1 + max Ṽ_{t+1}.
PlanResult plan_ubevs(const AgentCounters& counters, const UbevParams& params);

/// Original UBEV: per-timestep counts and the fixed (H - t) φ overestimate.
PlanResult plan_ubev_nonstationary(const NonStationaryCounters& counters, double delta);

/// Adds one episode. Throws std::invalid_argument unless trajectory.size() == H.
void update_counters(AgentCounters& counters, std::span<const Transition> trajectory, std::size_t H);
void update_counters(NonStationaryCounters& counters, std::span<const Transition> trajectory);

/// π_k(s, t). Throws std::out_of_range for t outside 1..H or s outside the table.
ActionIndex act(const PlanResult& plan, std::size_t t, StateIndex s);

}  // namespace regretlab

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "regretlab/mdp.hpp"
#include "regretlab/ubev.hpp"

namespace regretlab {

/// Absolute slack below V* that still counts as optimistic.
inline constexpr double kOptimismTolerance = 1e-9;

struct EpisodeDiagnostics {
    std::uint64_t episode = 0;
    bool optimism_violation = false;
    /// Same check restricted to t = 1.
    bool first_step_violation = false;
    std::uint64_t min_visit_under_policy = 0;
    std::vector<double> rng_vtilde;  ///< index t - 1
    bool good_episode = true;
    bool fn_event = false;
    std::size_t good_set_size = 0;
};

/// Number of (t, s) with v_tilde(t, s) < v_star(t, s) - 1e-9, over t in 1..H,
/// or over the single step `only_t` when given.
/// Throws std::invalid_argument on a shape mismatch.
std::size_t check_optimism(const ValueTable& v_tilde, const ValueTable& v_star,
                           std::optional<std::size_t> only_t = std::nullopt);

/// min over (s, t) of n(s, π(s, t)).
std::uint64_t min_visit_under_policy(const AgentCounters& counters, const Policy& policy);

/// Good episode: n(s, π(s,t)) >= ¼ · cumulative_w(s, π(s,t)) for every (s, t).
/// `cumulative_w` is Σ over past episodes and steps of the exact occupancy on
/// the true MDP, flattened in (s, a) order, and must match the counters in time.
bool classify_good_episode(const AgentCounters& counters, std::span<const double> cumulative_w,
                           const Policy& policy);

/// Pairs with ¼ · cumulative_w(s, a) >= H ln(9 S A / δ).
class GoodSet {
public:
    GoodSet(std::size_t num_actions, std::vector<bool> member)
        : A_(num_actions), member_(std::move(member)) {}

    bool contains(StateIndex s, ActionIndex a) const { return member_[s * A_ + a]; }
    std::size_t size() const;
    /// True when every member of `other` is also a member here.
    bool includes(const GoodSet& other) const;

private:
    std::size_t A_;
    std::vector<bool> member_;
};

GoodSet good_set_membership(std::span<const double> cumulative_w, std::size_t H, std::size_t S,
                            std::size_t A, double delta);

/// True when n(s, a) < ½ · cumulative_w(s, a) - H ln(9 S A / δ) for some pair.
bool fn_event(const AgentCounters& counters, std::span<const double> cumulative_w, std::size_t H,
              double delta);

/// Per step t: (rng Ṽ_t - 1) · sqrt(min visit under the policy) / (H √S).
/// Every entry is +∞ while some pair used by the policy is unvisited.
std::vector<double> rng_bound_margin(const ValueTable& v_tilde, const AgentCounters& counters,
                                     const Policy& policy, std::size_t H, std::size_t S);

}  // namespace regretlab

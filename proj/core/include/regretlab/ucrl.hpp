#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "regretlab/mdp.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

/// Statistics of an infinite-horizon UCRL2 run.
///
/// N, Rsum and Pcount hold the totals at the start of the current episode;
/// the running episode's observations live in v and the episode buffers until
/// the episode closes. N(s,a) = Σ_{s'} Pcount(s,a,s') always holds.
class UcrlState {
public:
    UcrlState(std::size_t num_states, std::size_t num_actions);

    std::size_t num_states() const { return S_; }
    std::size_t num_actions() const { return A_; }

    std::uint64_t N(StateIndex s, ActionIndex a) const { return N_[s * A_ + a]; }
    double Rsum(StateIndex s, ActionIndex a) const { return Rsum_[s * A_ + a]; }
    std::uint64_t Pcount(StateIndex s, ActionIndex a, StateIndex next) const {
        return Pcount_[(s * A_ + a) * S_ + next];
    }
    std::uint64_t v(StateIndex s, ActionIndex a) const { return v_[s * A_ + a]; }

    /// Steps executed so far.
    std::uint64_t t() const { return t_; }
    /// 1-based index of the first step of the current episode.
    std::uint64_t t_k() const { return t_k_; }
    std::uint64_t episodes() const { return episodes_; }

    std::optional<StateIndex> current_state;

    /// Records one observation in the running episode. Returns true when the
    /// doubling condition v(s,a) = max{1, N(s,a)} closes the episode.
    bool record(StateIndex s, ActionIndex a, double reward, StateIndex next);

    /// Folds the episode buffers into the totals and opens a new episode at
    /// step t + 1.
    void close_episode();
    void open_episode();

    bool needs_plan() const { return needs_plan_; }

    std::vector<StateIndex> policy;

private:
    std::size_t S_, A_;
    std::vector<std::uint64_t> N_;
    std::vector<double> Rsum_;
    std::vector<std::uint64_t> Pcount_;
    std::vector<std::uint64_t> v_;
    std::vector<double> ep_rsum_;
    std::vector<std::uint64_t> ep_pcount_;
    std::uint64_t t_ = 0;
    std::uint64_t t_k_ = 1;
    std::uint64_t episodes_ = 0;
    bool needs_plan_ = true;
};

struct ConfidenceWidths {
    std::vector<double> reward;      ///< (s,a): sqrt(7 ln(2 S A t_k / δ) / (2 max{1,N}))
    std::vector<double> transition;  ///< (s,a): sqrt(14 S ln(2 A t_k / δ) / (2 max{1,N}))
};

/// Throws std::invalid_argument unless δ ∈ (0, 1].
ConfidenceWidths confidence_widths(const UcrlState& state, double delta);

struct EviResult {
    std::vector<double> u;
    std::vector<ActionIndex> policy;
    double rho_tilde = 0.0;
    std::uint64_t iterations = 0;
};

/// Maximizes p·u over the L1 ball ||p - p_hat||_1 <= width on the simplex.
/// `order` lists states by decreasing u. Writes the maximizer into `out`.
void optimistic_transition(std::span<const double> p_hat, double width,
                           std::span<const StateIndex> order, std::span<double> out);

inline constexpr std::uint64_t kEviMaxIterations = 1'000'000;

/// Extended value iteration. u starts at 0 and every update is renormalized
/// so that min u = 0. The stopping test span(u_i - u_{i-1}) < epsilon_stop is
/// applied from the second update on. When `known_rewards` is given, those
/// means replace r̂ and the reward widths are ignored.
/// Throws std::runtime_error after kEviMaxIterations updates.
EviResult extended_value_iteration(const UcrlState& state, const ConfidenceWidths& widths,
                                   double epsilon_stop,
                                   std::optional<std::span<const double>> known_rewards = std::nullopt);

struct UcrlOptions {
    double delta = 0.1;
    bool known_rewards = false;
};

struct UcrlStepLog {
    std::uint64_t t;  ///< 1-based index of this step
    StateIndex s;
    ActionIndex a;
    double reward;
    StateIndex next;
    bool planned;               ///< EVI ran before this step
    std::uint64_t evi_iterations;
    bool episode_closed;        ///< this step triggered the doubling condition
};

/// One environment step without episodic reset: plans if a new episode is
/// open, follows the stationary policy, and closes the episode when the visited
/// pair's in-episode count reaches max{1, N}. The first call draws s ~ p0.
UcrlStepLog ucrl_step(UcrlState& state, const EpisodicMDP& mdp, Rng& rng, const UcrlOptions& options);

/// Optimal average reward. Analytic Σ_s μ(s) max_a r(s,a) for contextual
/// instances; otherwise relative value iteration for up to ceil(10 S / epsilon)
/// sweeps.
double optimal_gain(const EpisodicMDP& mdp, double epsilon = 1e-3);

}  // namespace regretlab

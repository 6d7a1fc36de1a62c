#include "regretlab/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace regretlab {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kRenormTol = 1e-9;

void normalize_distribution(std::span<double> dist, const std::string& what) {
    double sum = 0.0;
    for (double x : dist) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument(what + ": probability outside [0,1]");
        }
        sum += x;
    }
    const double err = std::abs(sum - 1.0);
    if (err <= kExactTol) return;
    if (err > kRenormTol) {
        throw std::invalid_argument(what + ": probabilities sum to " + std::to_string(sum));
    }
    for (double& x : dist) x /= sum;
}

}  // namespace

EpisodicMDP::EpisodicMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                         std::vector<double> p, std::vector<double> r, std::vector<double> p0,
                         RewardNoise noise, std::optional<ContextMetadata> metadata)
    : S_(num_states), A_(num_actions), H_(horizon), p_(std::move(p)), r_(std::move(r)),
      p0_(std::move(p0)), noise_(noise), meta_(std::move(metadata)) {
    if (S_ == 0 || A_ == 0 || H_ == 0) {
        throw std::invalid_argument("EpisodicMDP: S, A and H must be positive");
    }
    if (p_.size() != S_ * A_ * S_) throw std::invalid_argument("EpisodicMDP: p has wrong size");
    if (r_.size() != S_ * A_) throw std::invalid_argument("EpisodicMDP: r has wrong size");
    if (p0_.size() != S_) throw std::invalid_argument("EpisodicMDP: p0 has wrong size");

    for (std::size_t s = 0; s < S_; ++s) {
        for (std::size_t a = 0; a < A_; ++a) {
            normalize_distribution({p_.data() + (s * A_ + a) * S_, S_},
                                   "EpisodicMDP: p(" + std::to_string(s) + "," +
                                       std::to_string(a) + ",.)");
        }
    }
    for (double x : r_) {
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("EpisodicMDP: reward outside [0,1]");
    }
    normalize_distribution(p0_, "EpisodicMDP: p0");

    if (meta_) {
        if (meta_->mu.size() != S_) throw std::invalid_argument("EpisodicMDP: mu has wrong size");
        normalize_distribution(meta_->mu, "EpisodicMDP: mu");
        meta_->mu_min = *std::min_element(meta_->mu.begin(), meta_->mu.end());
        for (std::size_t sa = 0; sa < S_ * A_; ++sa) {
            for (std::size_t next = 0; next < S_; ++next) {
                if (std::abs(p_[sa * S_ + next] - meta_->mu[next]) > kExactTol) {
                    throw std::invalid_argument(
                        "EpisodicMDP: transition row differs from context distribution mu");
                }
            }
        }
    }
}

EpisodicMDP EpisodicMDP::with_horizon(std::size_t horizon) const {
    return EpisodicMDP(S_, A_, horizon, p_, r_, p0_, noise_, meta_);
}

std::vector<double> OccupancyTable::aggregate() const {
    std::vector<double> out(S_ * A_, 0.0);
    accumulate_into(out);
    return out;
}

void OccupancyTable::accumulate_into(std::span<double> acc) const {
    if (acc.size() != S_ * A_) throw std::invalid_argument("OccupancyTable: accumulator size");
    for (std::size_t t = 0; t < H_; ++t) {
        const double* wt = w_.data() + t * S_ * A_;
        for (std::size_t i = 0; i < S_ * A_; ++i) acc[i] += wt[i];
    }
}

namespace {

double expected_next(const EpisodicMDP& mdp, StateIndex s, ActionIndex a,
                     std::span<const double> next_values) {
    const auto row = mdp.row(s, a);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * next_values[j];
    return acc;
}

void check_policy(const EpisodicMDP& mdp, const Policy& pi) {
    if (pi.horizon() != mdp.horizon() || pi.num_states() != mdp.num_states()) {
        throw std::invalid_argument("policy shape does not match MDP");
    }
    for (std::size_t t = 1; t <= pi.horizon(); ++t) {
        for (std::size_t s = 0; s < pi.num_states(); ++s) {
            if (pi(t, s) >= mdp.num_actions()) throw std::invalid_argument("policy action out of range");
        }
    }
}

}  // namespace

Solution value_iteration(const EpisodicMDP& mdp) {
    const std::size_t H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
    Solution sol{ValueTable(H, S), Policy(H, S)};
    for (std::size_t t = H; t >= 1; --t) {
        const auto next = sol.values.step(t + 1);
        for (std::size_t s = 0; s < S; ++s) {
            double best = -1.0;
            ActionIndex best_a = 0;
            for (std::size_t a = 0; a < A; ++a) {
                const double q = mdp.reward(s, a) + expected_next(mdp, s, a, next);
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            sol.values.at(t, s) = best;
            sol.policy.at(t, s) = best_a;
        }
    }
    return sol;
}

ValueTable policy_evaluation(const EpisodicMDP& mdp, const Policy& pi) {
    check_policy(mdp, pi);
    const std::size_t H = mdp.horizon(), S = mdp.num_states();
    ValueTable v(H, S);
    for (std::size_t t = H; t >= 1; --t) {
        const auto next = v.step(t + 1);
        for (std::size_t s = 0; s < S; ++s) {
            const ActionIndex a = pi(t, s);
            v.at(t, s) = mdp.reward(s, a) + expected_next(mdp, s, a, next);
        }
    }
    return v;
}

OccupancyTable occupancy(const EpisodicMDP& mdp, const Policy& pi) {
    check_policy(mdp, pi);
    const std::size_t H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
    OccupancyTable w(H, S, A);
    std::vector<double> state_dist(mdp.initial().begin(), mdp.initial().end());
    std::vector<double> next_dist(S);
    for (std::size_t t = 1; t <= H; ++t) {
        std::fill(next_dist.begin(), next_dist.end(), 0.0);
        for (std::size_t s = 0; s < S; ++s) {
            const ActionIndex a = pi(t, s);
            w.at(t, s, a) = state_dist[s];
            if (state_dist[s] == 0.0) continue;
            const auto row = mdp.row(s, a);
            for (std::size_t j = 0; j < S; ++j) next_dist[j] += state_dist[s] * row[j];
        }
        state_dist.swap(next_dist);
    }
    return w;
}

EpisodicMDP action_averaged(const EpisodicMDP& mdp) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions();
    std::vector<double> p(S * S, 0.0), r(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            r[s] += mdp.reward(s, a);
            const auto row = mdp.row(s, a);
            for (std::size_t j = 0; j < S; ++j) p[s * S + j] += row[j];
        }
        r[s] /= static_cast<double>(A);
        for (std::size_t j = 0; j < S; ++j) p[s * S + j] /= static_cast<double>(A);
    }
    std::vector<double> p0(mdp.initial().begin(), mdp.initial().end());
    return EpisodicMDP(S, 1, mdp.horizon(), std::move(p), std::move(r), std::move(p0), mdp.noise(),
                       mdp.metadata());
}

double range(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("range of an empty vector");
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace regretlab

#include "regretlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace regretlab {

std::size_t check_optimism(const ValueTable& v_tilde, const ValueTable& v_star,
                           std::optional<std::size_t> only_t) {
    if (v_tilde.horizon() != v_star.horizon() || v_tilde.num_states() != v_star.num_states()) {
        throw std::invalid_argument("check_optimism: value tables differ in shape");
    }
    std::size_t first = 1, last = v_tilde.horizon();
    if (only_t) {
        if (*only_t < 1 || *only_t > last) throw std::invalid_argument("check_optimism: t out of range");
        first = last = *only_t;
    }
    std::size_t violations = 0;
    for (std::size_t t = first; t <= last; ++t) {
        for (std::size_t s = 0; s < v_tilde.num_states(); ++s) {
            if (v_tilde(t, s) < v_star(t, s) - kOptimismTolerance) ++violations;
        }
    }
    return violations;
}

std::uint64_t min_visit_under_policy(const AgentCounters& counters, const Policy& policy) {
    std::uint64_t lo = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t t = 1; t <= policy.horizon(); ++t) {
        for (std::size_t s = 0; s < policy.num_states(); ++s) lo = std::min(lo, counters.n(s, policy(t, s)));
    }
    return lo;
}

bool classify_good_episode(const AgentCounters& counters, std::span<const double> cumulative_w,
                           const Policy& policy) {
    const std::size_t A = counters.num_actions();
    for (std::size_t t = 1; t <= policy.horizon(); ++t) {
        for (std::size_t s = 0; s < policy.num_states(); ++s) {
            const ActionIndex a = policy(t, s);
            if (static_cast<double>(counters.n(s, a)) < 0.25 * cumulative_w[s * A + a]) return false;
        }
    }
    return true;
}

std::size_t GoodSet::size() const {
    return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true));
}

bool GoodSet::includes(const GoodSet& other) const {
    for (std::size_t i = 0; i < member_.size(); ++i) {
        if (other.member_[i] && !member_[i]) return false;
    }
    return true;
}

namespace {

double visitation_slack(std::size_t H, std::size_t S, std::size_t A, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
    return static_cast<double>(H) *
           std::log(9.0 * static_cast<double>(S) * static_cast<double>(A) / delta);
}

}  // namespace

GoodSet good_set_membership(std::span<const double> cumulative_w, std::size_t H, std::size_t S,
                            std::size_t A, double delta) {
    const double threshold = visitation_slack(H, S, A, delta);
    std::vector<bool> member(S * A);
    for (std::size_t i = 0; i < S * A; ++i) member[i] = 0.25 * cumulative_w[i] >= threshold;
    return GoodSet(A, std::move(member));
}

bool fn_event(const AgentCounters& counters, std::span<const double> cumulative_w, std::size_t H,
              double delta) {
    const std::size_t S = counters.num_states(), A = counters.num_actions();
    const double slack = visitation_slack(H, S, A, delta);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            if (static_cast<double>(counters.n(s, a)) < 0.5 * cumulative_w[s * A + a] - slack) return true;
        }
    }
    return false;
}

std::vector<double> rng_bound_margin(const ValueTable& v_tilde, const AgentCounters& counters,
                                     const Policy& policy, std::size_t H, std::size_t S) {
    const std::uint64_t min_visit = min_visit_under_policy(counters, policy);
    std::vector<double> out(H, std::numeric_limits<double>::infinity());
    if (min_visit == 0) return out;
    const double scale = std::sqrt(static_cast<double>(min_visit)) /
                         (static_cast<double>(H) * std::sqrt(static_cast<double>(S)));
    for (std::size_t t = 1; t <= H; ++t) out[t - 1] = (range(v_tilde.step(t)) - 1.0) * scale;
    return out;
}

}  // namespace regretlab

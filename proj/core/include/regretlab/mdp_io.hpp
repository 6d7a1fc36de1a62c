#pragma once

#include <string>
#include <string_view>

#include "regretlab/mdp.hpp"

namespace regretlab {

// MDP fixture format, one JSON object:
//
//   {
//     "S": 2, "A": 2, "H": 3,
//     "p":  [[[p(0,0,0), p(0,0,1)], [p(0,1,0), p(0,1,1)]], ...],   // p[s][a][s']
//     "r":  [[r(0,0), r(0,1)], ...],                               // r[s][a]
//     "p0": [p0(0), p0(1)],
//     "reward_noise": "bernoulli" | "deterministic",
//     "metadata": {} | {"mu": [...], "mu_min": x}
//   }
//
// Keys are emitted in the order above. Numbers use the shortest decimal form
// that round-trips to the same double.

std::string to_json(const EpisodicMDP& mdp);

/// Parses and validates. Throws std::invalid_argument on malformed input.
EpisodicMDP mdp_from_json(std::string_view text);

std::string_view to_string(RewardNoise noise);
RewardNoise reward_noise_from_string(std::string_view name);

}  // namespace regretlab

#include "regretlab/mdp_io.hpp"

#include <stdexcept>

#include "json.hpp"

namespace regretlab {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(RewardNoise noise) {
    return noise == RewardNoise::bernoulli ? "bernoulli" : "deterministic";
}

RewardNoise reward_noise_from_string(std::string_view name) {
    if (name == "bernoulli") return RewardNoise::bernoulli;
    if (name == "deterministic") return RewardNoise::deterministic;
    throw std::invalid_argument("unknown reward_noise '" + std::string(name) + "'");
}

std::string to_json(const EpisodicMDP& mdp) {
    const std::size_t S = mdp.num_states(), A = mdp.num_actions();
    ordered_json j;
    j["S"] = S;
    j["A"] = A;
    j["H"] = mdp.horizon();
    ordered_json p = ordered_json::array();
    ordered_json r = ordered_json::array();
    for (std::size_t s = 0; s < S; ++s) {
        ordered_json ps = ordered_json::array();
        ordered_json rs = ordered_json::array();
        for (std::size_t a = 0; a < A; ++a) {
            const auto row = mdp.row(s, a);
            ps.push_back(std::vector<double>(row.begin(), row.end()));
            rs.push_back(mdp.reward(s, a));
        }
        p.push_back(std::move(ps));
        r.push_back(std::move(rs));
    }
    j["p"] = std::move(p);
    j["r"] = std::move(r);
    j["p0"] = std::vector<double>(mdp.initial().begin(), mdp.initial().end());
    j["reward_noise"] = to_string(mdp.noise());
    ordered_json meta = ordered_json::object();
    if (mdp.metadata()) {
        meta["mu"] = mdp.metadata()->mu;
        meta["mu_min"] = mdp.metadata()->mu_min;
    }
    j["metadata"] = std::move(meta);
    return j.dump(2);
}

EpisodicMDP mdp_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto S = j.at("S").get<std::size_t>();
        const auto A = j.at("A").get<std::size_t>();
        const auto H = j.at("H").get<std::size_t>();
        const auto& jp = j.at("p");
        const auto& jr = j.at("r");
        if (jp.size() != S || jr.size() != S) throw std::invalid_argument("p/r outer size != S");
        std::vector<double> p, r;
        p.reserve(S * A * S);
        r.reserve(S * A);
        for (std::size_t s = 0; s < S; ++s) {
            if (jp[s].size() != A || jr[s].size() != A) throw std::invalid_argument("p/r size != A");
            for (std::size_t a = 0; a < A; ++a) {
                const auto row = jp[s][a].get<std::vector<double>>();
                if (row.size() != S) throw std::invalid_argument("p row size != S");
                p.insert(p.end(), row.begin(), row.end());
                r.push_back(jr[s][a].get<double>());
            }
        }
        auto p0 = j.at("p0").get<std::vector<double>>();
        const auto noise = reward_noise_from_string(j.at("reward_noise").get<std::string>());
        std::optional<ContextMetadata> meta;
        if (j.contains("metadata") && j["metadata"].contains("mu")) {
            meta = ContextMetadata{j["metadata"]["mu"].get<std::vector<double>>(), 0.0};
        }
        return EpisodicMDP(S, A, H, std::move(p), std::move(r), std::move(p0), noise, std::move(meta));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("MDP JSON: ") + e.what());
    }
}

}  // namespace regretlab

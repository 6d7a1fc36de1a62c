#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "regretlab/agents.hpp"
#include "regretlab/env_gen.hpp"
#include "regretlab/ubev.hpp"

namespace regretlab {

/// Bad user input. The message starts with the offending field path, e.g.
/// "agent.delta: must lie in (0, 1]".
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class TraceFormat { csv, json };

struct AgentConfig {
    AgentKind kind = AgentKind::ubev_s;
    double delta = 0.1;
    PhiPlusMode phi_plus_mode = PhiPlusMode::per_episode;
    bool known_rewards = false;
};

struct RunSection {
    std::optional<std::uint64_t> episodes;
    std::optional<std::uint64_t> steps;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    std::size_t parallelism = 1;
};

struct OutputSection {
    std::string dir = "out";
    TraceFormat format = TraceFormat::csv;
    std::uint64_t log_every = 1;
    bool diagnostics_on = false;
};

struct RunConfig {
    EnvSpec env;
    AgentConfig agent;
    RunSection run;
    OutputSection output;

    bool episodic() const { return agent.kind != AgentKind::ucrl; }
    /// K for episodic agents: run.episodes, else run.steps / H.
    std::uint64_t episodes() const;
    /// T: run.steps, else run.episodes * H.
    std::uint64_t steps() const;
};

/// Parses a JSON config. Unknown keys and invalid values raise ValidationError.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

/// Throws ValidationError on the first violated constraint.
void validate(const RunConfig& config);

/// Fully resolved config as a JSON object (every field present).
std::string to_json(const RunConfig& config, int indent = 2);

/// REGRET_LAB_THREADS, when set to a positive integer, overrides run.parallelism.
std::size_t resolve_parallelism(const RunConfig& config);

std::string_view to_string(EnvKind kind);
std::string_view to_string(PhiPlusMode mode);
std::string_view to_string(TraceFormat format);

}  // namespace regretlab

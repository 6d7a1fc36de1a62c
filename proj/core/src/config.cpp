#include "regretlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "regretlab/mdp_io.hpp"

namespace regretlab {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(EnvKind kind) {
    switch (kind) {
        case EnvKind::contextual: return "contextual";
        case EnvKind::random_mdp: return "random_mdp";
        case EnvKind::mab: return "mab";
        case EnvKind::max_reward_everywhere: return "max_reward_everywhere";
    }
    return "?";
}

std::string_view to_string(PhiPlusMode mode) {
    return mode == PhiPlusMode::per_episode ? "per_episode" : "persistent";
}

std::string_view to_string(TraceFormat format) { return format == TraceFormat::csv ? "csv" : "json"; }

std::uint64_t RunConfig::episodes() const {
    if (run.episodes) return *run.episodes;
    return run.steps ? *run.steps / env.H : 0;
}

std::uint64_t RunConfig::steps() const {
    if (run.steps) return *run.steps;
    return run.episodes ? *run.episodes * env.H : 0;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

void require_object(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto k : allowed) known = known || key == k;
        if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::uint64_t get_uint(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) {
        if (j.is_number_integer()) fail(path, "must be nonnegative");
        fail(path, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

double get_real(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

EnvKind env_kind_from(const std::string& s, const std::string& path) {
    for (auto k : {EnvKind::contextual, EnvKind::random_mdp, EnvKind::mab, EnvKind::max_reward_everywhere}) {
        if (s == to_string(k)) return k;
    }
    fail(path, "unknown env kind '" + s + "'");
}

void parse_env(const json& j, EnvSpec& env) {
    require_object(j, "env", {"kind", "S", "A", "H", "mu_concentration", "reward_gap", "r_star",
                              "reward_noise", "seed"});
    if (!j.contains("kind")) fail("env.kind", "required");
    env.kind = env_kind_from(get_string(j["kind"], "env.kind"), "env.kind");
    for (const char* key : {"A", "H"}) {
        if (!j.contains(key)) fail(std::string("env.") + key, "required");
    }
    if (j.contains("S")) {
        env.S = get_uint(j["S"], "env.S");
    } else if (env.kind != EnvKind::mab) {
        fail("env.S", "required");
    }
    env.A = get_uint(j["A"], "env.A");
    env.H = get_uint(j["H"], "env.H");
    if (j.contains("mu_concentration")) env.mu_concentration = get_real(j["mu_concentration"], "env.mu_concentration");
    if (j.contains("reward_gap") && !j["reward_gap"].is_null()) {
        env.reward_gap = get_real(j["reward_gap"], "env.reward_gap");
    }
    if (j.contains("r_star")) env.r_star = get_real(j["r_star"], "env.r_star");
    if (j.contains("reward_noise")) {
        try {
            env.reward_noise = reward_noise_from_string(get_string(j["reward_noise"], "env.reward_noise"));
        } catch (const ValidationError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            fail("env.reward_noise", e.what());
        }
    }
    if (j.contains("seed")) env.seed = get_uint(j["seed"], "env.seed");
}

void parse_agent(const json& j, AgentConfig& agent) {
    require_object(j, "agent", {"kind", "delta", "phi_plus_mode", "known_rewards"});
    if (!j.contains("kind")) fail("agent.kind", "required");
    try {
        agent.kind = agent_kind_from_string(get_string(j["kind"], "agent.kind"));
    } catch (const ValidationError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail("agent.kind", e.what());
    }
    if (j.contains("delta")) agent.delta = get_real(j["delta"], "agent.delta");
    if (j.contains("phi_plus_mode")) {
        const auto mode = get_string(j["phi_plus_mode"], "agent.phi_plus_mode");
        if (mode == "per_episode") {
            agent.phi_plus_mode = PhiPlusMode::per_episode;
        } else if (mode == "persistent") {
            agent.phi_plus_mode = PhiPlusMode::persistent;
        } else {
            fail("agent.phi_plus_mode", "expected per_episode or persistent");
        }
    }
    if (j.contains("known_rewards")) agent.known_rewards = get_bool(j["known_rewards"], "agent.known_rewards");
}

void parse_run(const json& j, RunSection& run) {
    require_object(j, "run", {"episodes", "steps", "trials", "master_seed", "parallelism"});
    if (j.contains("episodes")) run.episodes = get_uint(j["episodes"], "run.episodes");
    if (j.contains("steps")) run.steps = get_uint(j["steps"], "run.steps");
    if (j.contains("trials")) run.trials = get_uint(j["trials"], "run.trials");
    if (j.contains("master_seed")) run.master_seed = get_uint(j["master_seed"], "run.master_seed");
    if (j.contains("parallelism")) run.parallelism = get_uint(j["parallelism"], "run.parallelism");
}

void parse_output(const json& j, OutputSection& out) {
    require_object(j, "output", {"dir", "format", "log_every", "diagnostics_on"});
    if (j.contains("dir")) out.dir = get_string(j["dir"], "output.dir");
    if (j.contains("format")) {
        const auto f = get_string(j["format"], "output.format");
        if (f == "csv") {
            out.format = TraceFormat::csv;
        } else if (f == "json") {
            out.format = TraceFormat::json;
        } else {
            fail("output.format", "expected csv or json");
        }
    }
    if (j.contains("log_every")) out.log_every = get_uint(j["log_every"], "output.log_every");
    if (j.contains("diagnostics_on")) out.diagnostics_on = get_bool(j["diagnostics_on"], "output.diagnostics_on");
}

}  // namespace

void validate(const RunConfig& c) {
    if (c.env.S < 1) fail("env.S", "must be >= 1");
    if (c.env.A < 1) fail("env.A", "must be >= 1");
    if (c.env.H < 1) fail("env.H", "must be >= 1");
    if (c.env.kind == EnvKind::mab && c.env.S != 1) fail("env.S", "a mab has exactly one state");
    if (!(c.env.mu_concentration > 0.0)) fail("env.mu_concentration", "must be positive");
    if (c.env.reward_gap && !(*c.env.reward_gap >= 0.0 && *c.env.reward_gap <= 1.0)) {
        fail("env.reward_gap", "must lie in [0, 1]");
    }
    if (!(c.env.r_star > 0.0 && c.env.r_star <= 1.0)) fail("env.r_star", "must lie in (0, 1]");
    if (!(c.agent.delta > 0.0 && c.agent.delta <= 1.0)) fail("agent.delta", "must lie in (0, 1]");
    if (c.agent.known_rewards && c.agent.kind != AgentKind::ucrl) {
        fail("agent.known_rewards", "only supported for agent.kind = ucrl");
    }
    if (!c.run.episodes && !c.run.steps) fail("run", "one of episodes or steps is required");
    if (c.run.episodes && c.run.steps) fail("run", "give episodes or steps, not both");
    if (c.agent.kind == AgentKind::ucrl && !c.run.steps) fail("run.steps", "required for agent.kind = ucrl");
    if (c.run.episodes && *c.run.episodes < 1) fail("run.episodes", "must be >= 1");
    if (c.run.steps && *c.run.steps < 1) fail("run.steps", "must be >= 1");
    if (c.episodic() && c.episodes() < 1) fail("run.steps", "must be at least env.H");
    if (c.run.trials < 1) fail("run.trials", "must be >= 1");
    if (c.run.parallelism < 1) fail("run.parallelism", "must be >= 1");
    if (c.output.log_every < 1) fail("output.log_every", "must be >= 1");
}

RunConfig parse_run_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    require_object(j, "", {"env", "agent", "run", "output"});
    RunConfig c;
    for (const char* key : {"env", "agent", "run"}) {
        if (!j.contains(key)) fail(key, "required");
    }
    parse_env(j["env"], c.env);
    parse_agent(j["agent"], c.agent);
    parse_run(j["run"], c.run);
    if (j.contains("output")) parse_output(j["output"], c.output);
    validate(c);
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string to_json(const RunConfig& c, int indent) {
    ordered_json j;
    auto& env = j["env"];
    env["kind"] = to_string(c.env.kind);
    env["S"] = c.env.S;
    env["A"] = c.env.A;
    env["H"] = c.env.H;
    env["mu_concentration"] = c.env.mu_concentration;
    env["reward_gap"] = c.env.reward_gap ? ordered_json(*c.env.reward_gap) : ordered_json(nullptr);
    env["r_star"] = c.env.r_star;
    env["reward_noise"] = to_string(c.env.reward_noise);
    env["seed"] = c.env.seed;
    auto& agent = j["agent"];
    agent["kind"] = to_string(c.agent.kind);
    agent["delta"] = c.agent.delta;
    agent["phi_plus_mode"] = to_string(c.agent.phi_plus_mode);
    agent["known_rewards"] = c.agent.known_rewards;
    auto& run = j["run"];
    if (c.run.episodes) run["episodes"] = *c.run.episodes;
    if (c.run.steps) run["steps"] = *c.run.steps;
    run["trials"] = c.run.trials;
    run["master_seed"] = c.run.master_seed;
    run["parallelism"] = c.run.parallelism;
    auto& out = j["output"];
    out["dir"] = c.output.dir;
    out["format"] = to_string(c.output.format);
    out["log_every"] = c.output.log_every;
    out["diagnostics_on"] = c.output.diagnostics_on;
    return j.dump(indent);
}

std::size_t resolve_parallelism(const RunConfig& config) {
    if (const char* env = std::getenv("REGRET_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return config.run.parallelism;
}

}  // namespace regretlab

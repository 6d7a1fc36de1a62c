#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "regretlab/config.hpp"
#include "regretlab/trace.hpp"

namespace regretlab {

/// Version string recorded in every manifest.
std::string_view code_version();

struct RunFiles {
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> traces;
};

/// Writes trace_<trial:03>.{csv,json} per trial and manifest.json into `dir`
/// (created if needed). Trace bytes depend only on the config and seeds.
RunFiles write_run(const std::filesystem::path& dir, const RunConfig& config,
                   std::span<const RegretTrace> traces, double wall_seconds);

/// Manifest: {"code_version", "config", "trials": [{"trial", "seed", "file", "env_steps"}],
/// "wall_time_seconds"}.
std::string manifest_json(const RunConfig& config, std::span<const RegretTrace> traces,
                          std::span<const std::string> files, double wall_seconds);

/// A run directory read back from disk (CSV traces only).
struct StoredRun {
    std::filesystem::path dir;
    RunConfig config;
    std::vector<RegretTrace> traces;
};

StoredRun read_run(const std::filesystem::path& dir);

/// Finds every run directory (one holding manifest.json) under `root`,
/// including `root` itself, in sorted path order.
std::vector<std::filesystem::path> find_runs(const std::filesystem::path& root);

/// Prints a summary table of every run under `root` and writes
/// root/regret_vs_T.csv (agent,H,run,t_cumulative,mean_cumulative_regret).
/// Throws ValidationError when no run is found.
void report(const std::filesystem::path& root, std::ostream& out);

}  // namespace regretlab

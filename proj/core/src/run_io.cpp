#include "regretlab/run_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "regretlab/analysis.hpp"

#ifndef REGRETLAB_VERSION
#define REGRETLAB_VERSION "0.0.0"
#endif

namespace regretlab {

namespace fs = std::filesystem;

std::string_view code_version() { return "regretlab " REGRETLAB_VERSION; }

std::string manifest_json(const RunConfig& config, std::span<const RegretTrace> traces,
                          std::span<const std::string> files, double wall_seconds) {
    nlohmann::ordered_json j;
    j["code_version"] = code_version();
    j["config"] = nlohmann::ordered_json::parse(to_json(config));
    auto& trials = j["trials"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < traces.size(); ++i) {
        nlohmann::ordered_json t;
        t["trial"] = traces[i].trial;
        t["seed"] = traces[i].seed;
        t["file"] = i < files.size() ? files[i] : "";
        t["env_steps"] = traces[i].env_steps;
        trials.push_back(std::move(t));
    }
    j["wall_time_seconds"] = wall_seconds;
    return j.dump(2);
}

RunFiles write_run(const fs::path& dir, const RunConfig& config, std::span<const RegretTrace> traces,
                   double wall_seconds) {
    fs::create_directories(dir);
    RunFiles files;
    std::vector<std::string> names;
    const bool csv = config.output.format == TraceFormat::csv;
    for (const auto& tr : traces) {
        char name[64];
        std::snprintf(name, sizeof name, "trace_%03zu.%s", tr.trial, csv ? "csv" : "json");
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        if (csv) {
            write_trace_csv(out, tr);
        } else {
            write_trace_json(out, tr, config);
        }
        files.traces.push_back(path);
        names.emplace_back(name);
    }
    files.manifest = dir / "manifest.json";
    std::ofstream out(files.manifest, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + files.manifest.string());
    out << manifest_json(config, traces, names, wall_seconds) << '\n';
    return files;
}

StoredRun read_run(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw ValidationError(dir.string() + ": no manifest.json");
    const auto manifest = nlohmann::json::parse(in);
    StoredRun run{dir, parse_run_config(manifest.at("config").dump()), {}};
    for (const auto& t : manifest.at("trials")) {
        const fs::path file = dir / t.at("file").get<std::string>();
        if (file.extension() != ".csv") {
            throw ValidationError(file.string() + ": only CSV traces can be read back");
        }
        std::ifstream tin(file);
        if (!tin) throw ValidationError(file.string() + ": missing trace file");
        auto trace = read_trace_csv(tin);
        trace.trial = t.at("trial").get<std::size_t>();
        trace.seed = t.at("seed").get<std::uint64_t>();
        run.traces.push_back(std::move(trace));
    }
    return run;
}

std::vector<fs::path> find_runs(const fs::path& root) {
    std::vector<fs::path> runs;
    if (!fs::is_directory(root)) return runs;
    if (fs::exists(root / "manifest.json")) runs.push_back(root);
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) runs.push_back(entry.path());
    }
    std::sort(runs.begin(), runs.end());
    return runs;
}

void report(const fs::path& root, std::ostream& out) {
    const auto dirs = find_runs(root);
    if (dirs.empty()) throw ValidationError(root.string() + ": no runs found");

    std::ofstream csv(root / "regret_vs_T.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write regret_vs_T.csv");
    csv << "agent,H,run,t_cumulative,mean_cumulative_regret\n";

    char line[256];
    std::snprintf(line, sizeof line, "%-28s %-8s %4s %7s %10s %16s %10s\n", "run", "agent", "H", "trials",
                  "T", "mean_regret", "slope");
    out << line;
    for (const auto& dir : dirs) {
        const auto run = read_run(dir);
        if (run.traces.empty() || run.traces.front().rows.empty()) continue;
        const auto mean = average_traces(run.traces);
        const std::string name = dir == root ? "." : fs::relative(dir, root).string();
        const auto agent = to_string(run.config.agent.kind);
        for (const auto& r : mean.rows) {
            csv << agent << ',' << run.config.env.H << ',' << name << ',' << r.t_cumulative << ','
                << format_double(r.cumulative_regret) << '\n';
        }
        std::string slope = "n/a";
        try {
            slope = format_double(fit_loglog(mean, 0.5).slope).substr(0, 8);
        } catch (const std::invalid_argument&) {
        }
        std::snprintf(line, sizeof line, "%-28s %-8s %4zu %7zu %10llu %16.6f %10s\n", name.c_str(),
                      std::string(agent).c_str(), run.config.env.H, run.traces.size(),
                      static_cast<unsigned long long>(mean.rows.back().t_cumulative),
                      mean.rows.back().cumulative_regret, slope.c_str());
        out << line;
    }
}

}  // namespace regretlab

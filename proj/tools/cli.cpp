#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regretlab/analysis.hpp"
#include "regretlab/config.hpp"
#include "regretlab/env_gen.hpp"
#include "regretlab/run_io.hpp"
#include "regretlab/runner.hpp"

namespace regretlab {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
    auto config = load_run_config(config_path);
    if (!out_dir.empty()) config.output.dir = out_dir;
    const auto start = std::chrono::steady_clock::now();
    const auto mdp = make_env(config.env);
    const auto traces = run_trials(config, mdp);
    const auto files = write_run(config.output.dir, config, traces, seconds_since(start));
    out << "wrote " << files.traces.size() << " trace(s) and " << files.manifest.string() << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::size_t>& values, const std::string& out_dir, std::ostream& out) {
    if (param != "H") throw ValidationError("--param: only H can be swept");
    if (values.empty()) throw ValidationError("--values: at least one value required");
    auto base = load_run_config(config_path);
    const fs::path root = out_dir.empty() ? fs::path(base.output.dir) : fs::path(out_dir);

    auto start = std::chrono::steady_clock::now();
    const auto table = h_sweep(base, values, [&](const RunConfig& cfg, const std::vector<RegretTrace>& traces) {
        RunConfig stored = cfg;
        const fs::path dir =
            root / ("H_" + std::to_string(cfg.env.H) + "_" + std::string(to_string(cfg.agent.kind)));
        stored.output.dir = dir.string();
        write_run(dir, stored, traces, seconds_since(start));
        start = std::chrono::steady_clock::now();
    });

    std::ofstream csv(root / "sweep.csv", std::ios::binary);
    csv << "agent,H,episodes,steps,mean_regret,stderr_regret\n";
    char line[200];
    std::snprintf(line, sizeof line, "%-8s %4s %10s %10s %16s %12s\n", "agent", "H", "episodes", "steps",
                  "mean_regret", "stderr");
    out << line;
    for (const auto& r : table.rows) {
        const std::string agent(to_string(r.agent));
        csv << agent << ',' << r.H << ',' << r.episodes << ',' << r.steps << ',' << format_double(r.mean_regret)
            << ',' << format_double(r.stderr_regret) << '\n';
        std::snprintf(line, sizeof line, "%-8s %4zu %10llu %10llu %16.6f %12.6f\n", agent.c_str(), r.H,
                      static_cast<unsigned long long>(r.episodes), static_cast<unsigned long long>(r.steps),
                      r.mean_regret, r.stderr_regret);
        out << line;
    }
    if (values.size() >= 2) {
        const std::size_t lo = values.front(), hi = values.back();
        for (const AgentKind kind : {AgentKind::ubev_s, AgentKind::ubev}) {
            std::snprintf(line, sizeof line, "ratio %s regret(H=%zu)/regret(H=%zu) = %.6f\n",
                          std::string(to_string(kind)).c_str(), hi, lo, table.ratio(kind, hi, lo));
            out << line;
        }
    }
    return 0;
}

int cmd_fit(const std::string& trace_path, double burn_in, std::ostream& out, std::ostream& err) {
    RegretTrace trace;
    if (fs::is_directory(trace_path)) {
        const auto run = read_run(trace_path);
        trace = average_traces(run.traces);
    } else {
        std::ifstream in(trace_path);
        if (!in) throw ValidationError("--trace: cannot open '" + trace_path + "'");
        try {
            trace = read_trace_csv(in);
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string("--trace: ") + e.what());
        }
    }
    LogLogFit fit;
    try {
        fit = fit_loglog(trace, burn_in);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("fit: ") + e.what());
    }
    if (fit.skipped > 0) err << "warning: skipped " << fit.skipped << " nonpositive point(s)\n";
    char line[200];
    std::snprintf(line, sizeof line, "slope %.6f\nstderr %.6g\nintercept %.6f\npoints %zu\n", fit.slope,
                  fit.stderr_slope, fit.intercept, fit.points);
    out << line;
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tabular regret laboratory: optimistic RL agents, exact DP oracles, scaling fits"};
    app.require_subcommand(1);

    std::string config_path, out_dir, param, trace_path, report_dir;
    std::vector<std::size_t> values;
    double burn_in = 0.5;

    auto* run = app.add_subcommand("run", "run all trials of a config");
    run->add_option("--config", config_path, "JSON run config")->required();
    run->add_option("--out", out_dir, "output directory (overrides output.dir)");

    auto* sweep = app.add_subcommand("sweep", "compare ubev_s and ubev across horizons at matched T");
    sweep->add_option("--config", config_path, "JSON base config")->required();
    sweep->add_option("--param", param, "swept parameter (H)")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--out", out_dir, "output directory");

    auto* fit = app.add_subcommand("fit", "log-log fit of cumulative regret against T");
    fit->add_option("--trace", trace_path, "trace CSV or run directory")->required();
    fit->add_option("--burn-in", burn_in, "fraction of leading points to drop")->check(CLI::Range(0.0, 0.999));

    auto* rep = app.add_subcommand("report", "summarize runs and emit plot-ready CSV");
    rep->add_option("--dir", report_dir, "directory holding runs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir, out);
        if (*sweep) return cmd_sweep(config_path, param, values, out_dir, out);
        if (*fit) return cmd_fit(trace_path, burn_in, out, err);
        if (*rep) {
            report(report_dir, out);
            return 0;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "runtime failure: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace regretlab

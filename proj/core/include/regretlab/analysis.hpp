#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "regretlab/config.hpp"
#include "regretlab/trace.hpp"

namespace regretlab {

struct LogLogFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;   ///< points used by the regression
    std::size_t skipped = 0;  ///< post-burn-in points dropped for y <= 0 or x <= 0
};

/// Ordinary least squares of log y on log x over the points after the first
/// floor(burn_in_fraction · n). Nonpositive points are skipped and counted.
/// Throws std::invalid_argument with fewer than 20 usable points.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, double burn_in_fraction);

/// Fit of cumulative_regret against t_cumulative.
LogLogFit fit_loglog(const RegretTrace& trace, double burn_in_fraction);

/// Row-wise mean of regret columns over traces with identical row layout.
/// Diagnostic columns are taken from the first trace.
RegretTrace average_traces(std::span<const RegretTrace> traces);

/// Kendall rank correlation of the series against its index (tau-b, ties
/// counted as neither concordant nor discordant). 0 for fewer than 2 points.
double kendall_tau(std::span<const double> series);

struct SweepRow {
    AgentKind agent;
    std::size_t H;
    std::uint64_t episodes;
    std::uint64_t steps;
    double mean_regret;   ///< mean over trials of cumulative regret at the last episode
    double stderr_regret;
};

struct SweepTable {
    std::vector<SweepRow> rows;

    const SweepRow& at(AgentKind agent, std::size_t H) const;
    /// mean_regret(H_num) / mean_regret(H_den) for one agent.
    double ratio(AgentKind agent, std::size_t H_num, std::size_t H_den) const;
};

/// Called once per (H, agent) cell with the resolved config and its traces.
using SweepSink = std::function<void(const RunConfig&, const std::vector<RegretTrace>&)>;

/// Runs ubev_s and ubev at every H on the same context law and rewards, with
/// K = T / H episodes where T = base.steps(). Rows are ordered by H, then
/// ubev_s before ubev.
SweepTable h_sweep(const RunConfig& base, std::span<const std::size_t> H_values,
                   const SweepSink& sink = {});

}  // namespace regretlab

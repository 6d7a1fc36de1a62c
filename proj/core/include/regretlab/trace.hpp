#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace regretlab {

struct RunConfig;

/// One logged episode (for UCRL runs, one doubling episode).
struct TraceRow {
    std::uint64_t k = 0;
    std::uint64_t t_cumulative = 0;
    double per_episode_regret = 0.0;
    double cumulative_regret = 0.0;
    bool optimism_violation = false;
    std::uint64_t min_visit_under_policy = 0;
    double rng_vtilde_t1 = 0.0;
    bool good_episode = false;
    bool fn_event = false;

    // In-memory only; not part of the CSV layout.
    bool first_step_violation = false;
    std::size_t good_set_size = 0;
    std::uint64_t evi_iterations = 0;
};

struct RegretTrace {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    /// Environment steps executed (K·H episodic, T for UCRL).
    std::uint64_t env_steps = 0;
    std::vector<TraceRow> rows;
};

/// CSV columns, in order.
inline constexpr const char* kTraceColumns =
    "k,t_cumulative,per_episode_regret,cumulative_regret,optimism_violation,"
    "min_visit_under_policy,rng_vtilde_t1,good_episode,fn_event";

/// "%.17g", with nan/inf spelled "nan", "inf", "-inf".
std::string format_double(double x);

void write_trace_csv(std::ostream& out, const RegretTrace& trace);
/// {"trial", "seed", "config", "rows": [...]} with the CSV column names as row keys.
void write_trace_json(std::ostream& out, const RegretTrace& trace, const RunConfig& config);

/// Reads the CSV layout written by write_trace_csv. Throws std::invalid_argument
/// on a missing or mismatched header or a malformed row.
RegretTrace read_trace_csv(std::istream& in);

}  // namespace regretlab

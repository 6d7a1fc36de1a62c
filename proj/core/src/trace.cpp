#include "regretlab/trace.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "regretlab/config.hpp"

namespace regretlab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trace_csv(std::ostream& out, const RegretTrace& trace) {
    out << kTraceColumns << '\n';
    for (const auto& r : trace.rows) {
        out << r.k << ',' << r.t_cumulative << ',' << format_double(r.per_episode_regret) << ','
            << format_double(r.cumulative_regret) << ',' << (r.optimism_violation ? 1 : 0) << ','
            << r.min_visit_under_policy << ',' << format_double(r.rng_vtilde_t1) << ','
            << (r.good_episode ? 1 : 0) << ',' << (r.fn_event ? 1 : 0) << '\n';
    }
}

void write_trace_json(std::ostream& out, const RegretTrace& trace, const RunConfig& config) {
    nlohmann::ordered_json j;
    j["trial"] = trace.trial;
    j["seed"] = trace.seed;
    j["env_steps"] = trace.env_steps;
    j["config"] = nlohmann::ordered_json::parse(to_json(config));
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    // Non-finite values are written as strings so the document stays valid JSON.
    auto num = [](double x) {
        return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(format_double(x));
    };
    for (const auto& r : trace.rows) {
        nlohmann::ordered_json row;
        row["k"] = r.k;
        row["t_cumulative"] = r.t_cumulative;
        row["per_episode_regret"] = num(r.per_episode_regret);
        row["cumulative_regret"] = num(r.cumulative_regret);
        row["optimism_violation"] = r.optimism_violation ? 1 : 0;
        row["min_visit_under_policy"] = r.min_visit_under_policy;
        row["rng_vtilde_t1"] = num(r.rng_vtilde_t1);
        row["good_episode"] = r.good_episode ? 1 : 0;
        row["fn_event"] = r.fn_event ? 1 : 0;
        rows.push_back(std::move(row));
    }
    out << j.dump(1) << '\n';
}

namespace {

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& s) {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

}  // namespace

RegretTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceColumns) {
        throw std::invalid_argument("trace CSV: missing or unexpected header");
    }
    RegretTrace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 9) {
            throw std::invalid_argument("trace CSV line " + std::to_string(line_no) + ": expected 9 fields");
        }
        try {
            TraceRow r;
            r.k = parse_uint(f[0]);
            r.t_cumulative = parse_uint(f[1]);
            r.per_episode_regret = parse_double(f[2]);
            r.cumulative_regret = parse_double(f[3]);
            r.optimism_violation = parse_uint(f[4]) != 0;
            r.min_visit_under_policy = parse_uint(f[5]);
            r.rng_vtilde_t1 = parse_double(f[6]);
            r.good_episode = parse_uint(f[7]) != 0;
            r.fn_event = parse_uint(f[8]) != 0;
            trace.rows.push_back(r);
        } catch (const std::logic_error& e) {
            throw std::invalid_argument("trace CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!trace.rows.empty()) trace.env_steps = trace.rows.back().t_cumulative;
    return trace;
}

}  // namespace regretlab

#include "regretlab/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "regretlab/env_gen.hpp"
#include "regretlab/runner.hpp"

namespace regretlab {

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, double burn_in_fraction) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: x and y differ in length");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw std::invalid_argument("fit_loglog: burn-in fraction must lie in [0, 1)");
    }
    const auto start = static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(x.size())));

    LogLogFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = start; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) {
            ++fit.skipped;
            continue;
        }
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    fit.points = lx.size();
    if (fit.points < 20) {
        throw std::invalid_argument("fit_loglog: need at least 20 positive points after burn-in, have " +
                                    std::to_string(fit.points));
    }

    const double n = static_cast<double>(fit.points);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog: x values are all equal");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += e * e;
    }
    fit.stderr_slope = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

LogLogFit fit_loglog(const RegretTrace& trace, double burn_in_fraction) {
    std::vector<double> x, y;
    x.reserve(trace.rows.size());
    y.reserve(trace.rows.size());
    for (const auto& r : trace.rows) {
        x.push_back(static_cast<double>(r.t_cumulative));
        y.push_back(r.cumulative_regret);
    }
    return fit_loglog(x, y, burn_in_fraction);
}

RegretTrace average_traces(std::span<const RegretTrace> traces) {
    if (traces.empty()) throw std::invalid_argument("average_traces: no traces");
    RegretTrace out = traces.front();
    const double n = static_cast<double>(traces.size());
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        double per = 0.0, cum = 0.0;
        for (const auto& tr : traces) {
            if (tr.rows.size() != out.rows.size() || tr.rows[i].t_cumulative != out.rows[i].t_cumulative) {
                throw std::invalid_argument("average_traces: traces have different row layouts");
            }
            per += tr.rows[i].per_episode_regret;
            cum += tr.rows[i].cumulative_regret;
        }
        out.rows[i].per_episode_regret = per / n;
        out.rows[i].cumulative_regret = cum / n;
    }
    return out;
}

double kendall_tau(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) return 0.0;
    double concordant = 0.0, discordant = 0.0, ties = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (series[j] > series[i]) {
                concordant += 1.0;
            } else if (series[j] < series[i]) {
                discordant += 1.0;
            } else {
                ties += 1.0;
            }
        }
    }
    const double pairs = concordant + discordant + ties;
    const double denom = std::sqrt(pairs * (pairs - ties));
    return denom == 0.0 ? 0.0 : (concordant - discordant) / denom;
}

const SweepRow& SweepTable::at(AgentKind agent, std::size_t H) const {
    for (const auto& r : rows) {
        if (r.agent == agent && r.H == H) return r;
    }
    throw std::out_of_range("SweepTable: no row for the requested agent and H");
}

double SweepTable::ratio(AgentKind agent, std::size_t H_num, std::size_t H_den) const {
    return at(agent, H_num).mean_regret / at(agent, H_den).mean_regret;
}

SweepTable h_sweep(const RunConfig& base, std::span<const std::size_t> H_values, const SweepSink& sink) {
    const std::uint64_t T = base.steps();
    SweepTable table;
    for (const std::size_t H : H_values) {
        if (H == 0 || T / H == 0) throw ValidationError("sweep: H must lie in 1..T");
        for (const AgentKind kind : {AgentKind::ubev_s, AgentKind::ubev}) {
            RunConfig cfg = base;
            cfg.env.H = H;
            cfg.agent.kind = kind;
            cfg.agent.known_rewards = false;
            cfg.run.steps.reset();
            cfg.run.episodes = T / H;
            validate(cfg);

            const auto mdp = make_env(cfg.env);
            const auto traces = run_trials(cfg, mdp);
            double sum = 0.0, sum_sq = 0.0;
            for (const auto& tr : traces) {
                const double r = tr.rows.back().cumulative_regret;
                sum += r;
                sum_sq += r * r;
            }
            const double n = static_cast<double>(traces.size());
            const double mean = sum / n;
            const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
            table.rows.push_back({kind, H, T / H, (T / H) * H, mean, std::sqrt(var / n)});
            if (sink) sink(cfg, traces);
        }
    }
    return table;
}

}  // namespace regretlab

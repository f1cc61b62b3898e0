#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "viewplan/estimator.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/scenario.hpp"
#include "viewplan/svg.hpp"

namespace viewplan {

struct StepRecord {
    int step = 0;
    Viewpoint viewpoint;
    std::optional<Action> action;  // action taken out of this step; empty on the terminal step
    double value = 0.0;
    bool detected = true;
    double dist_to_target = 0.0;   // D_k
    double posterior_trace = 0.0;  // P_k
};

enum class TerminalReason { Threshold, MaxSteps };

struct RunMetrics {
    std::vector<StepRecord> steps;
    std::optional<int> steps_to_threshold;  // empty: never reached
    TerminalReason reason = TerminalReason::MaxSteps;
    std::uint64_t seed = 0;
};

/// One sense -> estimate -> (stop?) -> plan -> move episode. Deterministic in
/// (scenario, planner type, seed); planners sharing a seed see identical
/// sensor noise and identical initial ensembles.
inline RunMetrics run_episode(const Scenario& sc, PlannerType type, std::uint64_t seed) {
    const PlannerSpec spec = sc.planner_of(type);
    EpisodeStreams streams(seed);
    ParticleEnsemble ens = init_ensemble(sc.prior, sc.estimator.particle_count, streams.estimator);

    const BasisKind basis = sc.truth.basis;
    RunMetrics rm;
    rm.seed = seed;
    Viewpoint v = sc.start;

    for (int k = 0;; ++k) {
        Measurement m = measure(sc.truth, v.position, sc.noise, sc.occlusion, streams.sensor, k);
        bayes_update(ens, basis, m, sc.likelihood);
        if (effective_sample_size(ens) <
            sc.estimator.resample_threshold * static_cast<double>(ens.count))
            resample(ens, streams.estimator, sc.estimator.roughening);

        StepRecord rec;
        rec.step = k;
        rec.viewpoint = v;
        rec.value = m.value;
        rec.detected = m.detected;
        rec.dist_to_target = distance(v.position, sc.target.position);
        rec.posterior_trace = posterior_trace(ens);
        rm.steps.push_back(rec);

        if (m.value >= sc.confidence_threshold && m.detected) {
            rm.reason = TerminalReason::Threshold;
            rm.steps_to_threshold = k;
            break;
        }
        if (k == sc.max_steps) {
            rm.reason = TerminalReason::MaxSteps;
            break;
        }
        const ScoredAction sa =
            select_action(spec, sc.grid, v, ens, basis, sc.likelihood, k, streams);
        rm.steps.back().action = sa.action;
        v = sa.successor;
    }
    return rm;
}

/// Canonical text form of a run, used for reproducibility checks.
inline std::string serialize_run(const RunMetrics& rm) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "seed=%llu reason=%s steps_to_threshold=%s\n",
                  static_cast<unsigned long long>(rm.seed),
                  rm.reason == TerminalReason::Threshold ? "threshold" : "max_steps",
                  rm.steps_to_threshold ? std::to_string(*rm.steps_to_threshold).c_str() : "none");
    out += buf;
    for (const StepRecord& r : rm.steps) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g,%s,%.17g,%d,%.17g,%.17g\n",
                      r.step, r.viewpoint.elev_idx, r.viewpoint.azim_idx, r.viewpoint.position[0],
                      r.viewpoint.position[1], r.viewpoint.position[2],
                      r.action ? action_name(*r.action) : "-", r.value, r.detected ? 1 : 0,
                      r.dist_to_target, r.posterior_trace);
        out += buf;
    }
    return out;
}

struct PlannerAggregate {
    PlannerType type = PlannerType::Dcee;
    std::vector<RunMetrics> runs;
    // per-step statistics across runs; early-terminating runs carry their
    // final D and P forward so every step averages the same number of runs
    std::vector<double> mean_dist, std_dist, mean_trace, std_trace;
    double median_steps_to_threshold = 0.0;  // capped runs enter as max_steps + 1
    int not_reached = 0;
};

struct BatchReport {
    std::string scenario_name;
    std::vector<PlannerAggregate> planners;
    std::uint64_t base_seed = 0;
    int n_runs = 0;
    int max_steps = 0;
};

namespace detail {

inline void aggregate(PlannerAggregate& agg, int /*max_steps*/) {
    std::size_t longest = 0;
    for (const auto& r : agg.runs) longest = std::max(longest, r.steps.size());
    const double n = static_cast<double>(agg.runs.size());
    agg.mean_dist.assign(longest, 0.0);
    agg.std_dist.assign(longest, 0.0);
    agg.mean_trace.assign(longest, 0.0);
    agg.std_trace.assign(longest, 0.0);

    auto value_at = [](const std::vector<StepRecord>& steps, std::size_t k, bool dist) {
        const StepRecord& r = k < steps.size() ? steps[k] : steps.back();
        return dist ? r.dist_to_target : r.posterior_trace;
    };
    for (std::size_t k = 0; k < longest; ++k) {
        double sd = 0.0, st = 0.0;
        for (const auto& r : agg.runs) {
            sd += value_at(r.steps, k, true);
            st += value_at(r.steps, k, false);
        }
        agg.mean_dist[k] = sd / n;
        agg.mean_trace[k] = st / n;
        double vd = 0.0, vt = 0.0;
        for (const auto& r : agg.runs) {
            const double dd = value_at(r.steps, k, true) - agg.mean_dist[k];
            const double dt = value_at(r.steps, k, false) - agg.mean_trace[k];
            vd += dd * dd;
            vt += dt * dt;
        }
        const double denom = agg.runs.size() > 1 ? n - 1.0 : 1.0;
        agg.std_dist[k] = std::sqrt(vd / denom);
        agg.std_trace[k] = std::sqrt(vt / denom);
    }
}

inline double median_steps(const PlannerAggregate& agg, int max_steps) {
    std::vector<double> s;
    s.reserve(agg.runs.size());
    for (const auto& r : agg.runs)
        s.push_back(r.steps_to_threshold ? static_cast<double>(*r.steps_to_threshold)
                                         : static_cast<double>(max_steps + 1));
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

}  // namespace detail

/// Runs every planner over the same seed range (base_seed .. base_seed+n-1),
/// so noise realizations are paired run-for-run across planners. Episodes
/// execute in parallel; results and aggregates are assembled in seed order.
inline BatchReport run_batch(const Scenario& sc, const std::vector<PlannerType>& kinds,
                             int n_runs, std::uint64_t base_seed,
                             unsigned n_threads = std::thread::hardware_concurrency()) {
    if (kinds.empty()) throw ValidationError("planner list is empty");
    if (n_runs < 1) throw ValidationError("n_runs must be >= 1");

    BatchReport report;
    report.scenario_name = sc.name;
    report.base_seed = base_seed;
    report.n_runs = n_runs;
    report.max_steps = sc.max_steps;
    report.planners.resize(kinds.size());

    struct Task {
        std::size_t planner_idx;
        int run_idx;
    };
    std::vector<Task> tasks;
    tasks.reserve(kinds.size() * static_cast<std::size_t>(n_runs));
    for (std::size_t pi = 0; pi < kinds.size(); ++pi) {
        report.planners[pi].type = kinds[pi];
        report.planners[pi].runs.resize(static_cast<std::size_t>(n_runs));
        for (int r = 0; r < n_runs; ++r) tasks.push_back({pi, r});
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const Task& task = tasks[t];
            report.planners[task.planner_idx].runs[static_cast<std::size_t>(task.run_idx)] =
                run_episode(sc, kinds[task.planner_idx],
                            base_seed + static_cast<std::uint64_t>(task.run_idx));
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(n_threads, tasks.size()));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (auto& agg : report.planners) {
        detail::aggregate(agg, sc.max_steps);
        agg.median_steps_to_threshold = detail::median_steps(agg, sc.max_steps);
        agg.not_reached = 0;
        for (const auto& r : agg.runs)
            if (!r.steps_to_threshold) ++agg.not_reached;
    }
    return report;
}

inline std::string metrics_csv(const PlannerAggregate& agg) {
    std::string out = "step,mean_D,std_D,mean_P,std_P\n";
    char buf[192];
    for (std::size_t k = 0; k < agg.mean_dist.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", k, agg.mean_dist[k],
                      agg.std_dist[k], agg.mean_trace[k], agg.std_trace[k]);
        out += buf;
    }
    return out;
}

inline std::string summary_csv(const BatchReport& report) {
    std::string out = "planner,median_steps_to_threshold,not_reached,runs\n";
    char buf[128];
    for (const auto& agg : report.planners) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%d,%d\n", planner_name(agg.type),
                      agg.median_steps_to_threshold, agg.not_reached, report.n_runs);
        out += buf;
    }
    return out;
}

/// Writes metrics_<planner>.csv per planner plus summary.csv. Returns the
/// written paths.
inline std::vector<std::string> export_csv(const BatchReport& report, const std::string& dir) {
    if (report.planners.empty()) throw ValidationError("report has no planners");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::vector<std::string> written;
    auto write_file = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path + "'");
        out << content;
        written.push_back(path);
    };
    for (const auto& agg : report.planners)
        write_file("metrics_" + std::string(planner_name(agg.type)) + ".csv", metrics_csv(agg));
    write_file("summary.csv", summary_csv(report));
    return written;
}

/// Writes distance_mean.svg and trace_mean.svg line charts.
inline std::vector<std::string> export_svg(const BatchReport& report, const std::string& dir) {
    if (report.planners.empty()) throw ValidationError("report has no planners");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);

    LineChart dist_chart(report.scenario_name + ": mean distance to target", "step", "mean D");
    LineChart trace_chart(report.scenario_name + ": mean posterior trace", "step", "mean P");
    for (const auto& agg : report.planners) {
        dist_chart.add_series(planner_name(agg.type), agg.mean_dist);
        trace_chart.add_series(planner_name(agg.type), agg.mean_trace);
    }
    std::vector<std::string> written;
    auto write_file = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path + "'");
        out << content;
        written.push_back(path);
    };
    write_file("distance_mean.svg", dist_chart.render());
    write_file("trace_mean.svg", trace_chart.render());
    return written;
}

}  // namespace viewplan

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "viewplan/viewplan.hpp"

namespace {

using namespace viewplan;

std::vector<PlannerType> parse_planner_list(const std::string& csv) {
    std::vector<PlannerType> kinds;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) kinds.push_back(planner_from_name(item));
    }
    if (kinds.empty()) throw ValidationError("no planners given");
    return kinds;
}

int cmd_simulate(const std::string& scenario_path, const std::string& planners_csv, int runs,
                 std::uint64_t seed, const std::string& out_dir, int max_steps_override,
                 unsigned threads) {
    Scenario sc = load_scenario(scenario_path);
    if (max_steps_override > 0) sc.max_steps = max_steps_override;
    const auto kinds = parse_planner_list(planners_csv);

    std::printf("scenario %s: %dx%d grid, radius %g, N=%zu, threshold %g\n", sc.name.c_str(),
                sc.grid.n_elev, sc.grid.n_azim, sc.grid.radius, sc.estimator.particle_count,
                sc.confidence_threshold);
    std::printf("start  snapped to (%d,%d) [%.4f %.4f %.4f], snap distance %.4g\n",
                sc.start.elev_idx, sc.start.azim_idx, sc.start.position[0], sc.start.position[1],
                sc.start.position[2], sc.start_snap_distance);
    std::printf("target snapped to (%d,%d) [%.4f %.4f %.4f], snap distance %.4g\n",
                sc.target.elev_idx, sc.target.azim_idx, sc.target.position[0],
                sc.target.position[1], sc.target.position[2], sc.target_snap_distance);

    const BatchReport report = run_batch(sc, kinds, runs, seed, threads);
    const auto csvs = export_csv(report, out_dir);
    const auto svgs = export_svg(report, out_dir);

    std::printf("\n%-8s %10s %12s\n", "planner", "median", "not_reached");
    for (const auto& agg : report.planners)
        std::printf("%-8s %10.1f %12d\n", planner_name(agg.type), agg.median_steps_to_threshold,
                    agg.not_reached);
    std::printf("\nwrote:\n");
    for (const auto& p : csvs) std::printf("  %s\n", p.c_str());
    for (const auto& p : svgs) std::printf("  %s\n", p.c_str());
    return 0;
}

int cmd_fit(const std::string& dataset_path, int basis_arg, double prune_floor,
            const std::string& out_path) {
    const BasisKind kind = basis_arg == 20 ? BasisKind::Full20 : BasisKind::Reduced6;
    const Dataset ds = load_dataset(dataset_path);
    const FitReport report = fit_least_squares(ds, kind);

    std::printf("fit %s on %zu samples (%zu undetected rows skipped)\n", basis_name(kind),
                ds.samples.size(), ds.skipped_undetected);
    std::printf("mean error (MAE): %.6g\ntheta:\n", report.mean_error);
    for (std::size_t i = 0; i < report.theta.coeffs.size(); ++i)
        std::printf("  theta%-2zu % .8g\n", i + 1, report.theta.coeffs[i]);

    nlohmann::json j;
    j["basis"] = basis_name(kind);
    j["samples"] = ds.samples.size();
    j["mean_error"] = report.mean_error;
    j["theta"] = report.theta.coeffs;
    j["residuals"] = report.residuals;
    if (kind == BasisKind::Full20 && prune_floor >= 0.0) {
        const PruneResult pr = prune_basis(report, prune_floor);
        j["prune"] = {{"floor", prune_floor},
                      {"kept_indices", pr.kept_indices},
                      {"reduced_theta", pr.reduced.coeffs},
                      {"kept_equals_canonical", pr.kept_equals_canonical}};
        std::printf("prune floor %g keeps %zu regressors; canonical six: %s\n", prune_floor,
                    pr.kept_indices.size(), pr.kept_equals_canonical ? "yes" : "no");
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write '" + out_path + "'");
        out << j.dump(2) << "\n";
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_inspect(const std::string& scenario_path) {
    const Scenario sc = load_scenario(scenario_path);
    std::printf("scenario %s\n", sc.name.c_str());
    std::printf("  grid: %dx%d, radius %g (%d viewpoints)\n", sc.grid.n_elev, sc.grid.n_azim,
                sc.grid.radius, sc.grid.size());
    std::printf("  basis: %s, noise var %g, likelihood sigma %g, N=%zu\n",
                basis_name(sc.truth.basis), sc.noise.variance, sc.likelihood.sigma,
                sc.estimator.particle_count);

    const auto [opt_vp, opt_val] = constrained_optimum(sc.truth, sc.grid);
    std::printf("  grid optimum: (%d,%d) [%.4f %.4f %.4f], value %.6f\n", opt_vp.elev_idx,
                opt_vp.azim_idx, opt_vp.position[0], opt_vp.position[1], opt_vp.position[2],
                opt_val);
    std::printf("  start  (%d,%d) [%.4f %.4f %.4f], snap distance %.4g\n", sc.start.elev_idx,
                sc.start.azim_idx, sc.start.position[0], sc.start.position[1], sc.start.position[2],
                sc.start_snap_distance);
    std::printf("  target (%d,%d) [%.4f %.4f %.4f], snap distance %.4g\n", sc.target.elev_idx,
                sc.target.azim_idx, sc.target.position[0], sc.target.position[1],
                sc.target.position[2], sc.target_snap_distance);

    if (sc.truth.basis == BasisKind::Reduced6) {
        try {
            const Vec3 g = unconstrained_optimum(sc.truth.theta);
            const Vec3 grad = reward_gradient(sc.truth, g);
            const CurvatureReport cr = curvature_at(sc.truth, g);
            std::printf("  stationary point g(theta): [%.4f %.4f %.4f] (|p| = %.4f)\n", g[0], g[1],
                        g[2], norm(g));
            std::printf("    gradient norm there: %.3g\n", norm(grad));
            std::printf("    Hessian eigenvalues: %.4g %.4g %.4g -> %s\n", cr.eigenvalues[0],
                        cr.eigenvalues[1], cr.eigenvalues[2],
                        cr.negative_definite ? "locally strictly concave (max)"
                                             : "not negative definite (saddle or min)");
        } catch (const SingularParameterError& e) {
            std::printf("  stationary point g(theta): unavailable (%s)\n", e.what());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viewpoint planning simulator: confidence-field estimation and "
                 "next-best-view selection on a hemispherical grid"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", planners = "dcee,mpc,entropy";
    int runs = 100, max_steps = -1;
    std::uint64_t seed = 42;
    unsigned threads = std::thread::hardware_concurrency();

    auto* sim = app.add_subcommand("simulate", "run planner batches and export metrics");
    sim->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sim->add_option("--planners", planners, "comma list of dcee,mpc,entropy");
    sim->add_option("--runs", runs, "independent runs per planner");
    sim->add_option("--seed", seed, "base seed; run j uses seed+j");
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--max-steps", max_steps, "override scenario step cap");
    sim->add_option("--threads", threads, "worker threads");

    std::string dataset_path, fit_out;
    int basis_arg = 6;
    double prune_floor = -1.0;
    auto* fit = app.add_subcommand("fit", "least-squares field identification from a CSV dataset");
    fit->add_option("--dataset", dataset_path, "CSV px,py,pz,confidence[,detected]")->required();
    fit->add_option("--basis", basis_arg, "6 or 20")->check(CLI::IsMember({6, 20}));
    fit->add_option("--prune-floor", prune_floor, "report 20-term coefficients above this magnitude");
    fit->add_option("--out", fit_out, "write the fit report as JSON");

    std::string inspect_path;
    auto* insp = app.add_subcommand("inspect", "print grid optimum, snapped targets, curvature");
    insp->add_option("--scenario", inspect_path, "scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(scenario_path, planners, runs, seed, out_dir, max_steps, threads);
        if (fit->parsed()) return cmd_fit(dataset_path, basis_arg, prune_floor, fit_out);
        if (insp->parsed()) return cmd_inspect(inspect_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

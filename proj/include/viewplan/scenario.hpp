#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "viewplan/errors.hpp"
#include "viewplan/estimator.hpp"
#include "viewplan/geometry.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/reward.hpp"
#include "viewplan/sensor.hpp"

namespace viewplan {

struct EstimatorParams {
    std::size_t particle_count = 10000;
    double resample_threshold = 0.5;  // resample when ESS < threshold * N
    double roughening = 0.01;
};

/// A fully resolved experiment configuration. Positions given in a scenario
/// file are snapped to the nearest grid node at load; the snapped nodes and
/// snap distances are kept so callers can log them.
struct Scenario {
    std::string name;
    GridDomain grid;
    RewardModel truth;
    NoiseModel noise;
    OcclusionModel occlusion;
    PriorSpec prior;
    EstimatorParams estimator;
    LikelihoodSpec likelihood;

    Vec3 requested_start{0, 0, 0};
    Vec3 requested_target{0, 0, 0};
    Viewpoint start;
    Viewpoint target;
    double start_snap_distance = 0.0;
    double target_snap_distance = 0.0;

    double confidence_threshold = 0.95;
    int max_steps = 200;

    PlannerSpec default_planner;
    double field_max = 0.0;  // max field value over the grid; feeds the entropy range default

    PlannerSpec planner_of(PlannerType type) const {
        PlannerSpec s = default_planner;
        s.type = type;
        return s;
    }
};

namespace detail {

inline Vec3 vec3_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3)
        throw ValidationError(what + " must be a 3-element array");
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    try {
        sc.name = j.value("name", "unnamed");

        const auto& g = j.at("grid");
        sc.grid = build_grid(g.at("radius").get<double>(), g.at("n_elev").get<int>(),
                             g.at("n_azim").get<int>());

        const std::string basis_str = j.value("basis", "reduced6");
        BasisKind basis;
        if (basis_str == "reduced6") basis = BasisKind::Reduced6;
        else if (basis_str == "full20") basis = BasisKind::Full20;
        else throw ValidationError("basis must be reduced6 or full20");
        sc.truth = RewardModel(basis,
                               ThetaVector(basis, j.at("theta_true").get<std::vector<double>>()));

        const auto& n = j.at("noise");
        const std::string dist = n.value("distribution", "gaussian");
        if (dist == "gaussian") sc.noise.distribution = NoiseModel::Distribution::Gaussian;
        else if (dist == "uniform_sym") sc.noise.distribution = NoiseModel::Distribution::UniformSym;
        else throw ValidationError("noise.distribution must be gaussian or uniform_sym");
        sc.noise.variance = n.at("variance").get<double>();
        if (!(sc.noise.variance >= 0.0) || !std::isfinite(sc.noise.variance))
            throw ValidationError("noise.variance must be finite and >= 0");

        if (j.contains("occlusion")) {
            const auto& o = j.at("occlusion");
            const std::string mode = o.value("mode", "always_detect");
            if (mode == "always_detect") sc.occlusion.mode = OcclusionModel::Mode::AlwaysDetect;
            else if (mode == "floor_threshold") {
                sc.occlusion.mode = OcclusionModel::Mode::FloorThreshold;
                sc.occlusion.c_min = o.at("c_min").get<double>();
            } else if (mode == "bernoulli") {
                sc.occlusion.mode = OcclusionModel::Mode::Bernoulli;
                sc.occlusion.p_miss = o.at("p_miss").get<double>();
                if (sc.occlusion.p_miss < 0.0 || sc.occlusion.p_miss > 1.0)
                    throw ValidationError("occlusion.p_miss must be in [0,1]");
            } else
                throw ValidationError("occlusion.mode must be always_detect|floor_threshold|bernoulli");
        }

        const auto& pr = j.at("prior");
        sc.prior.lo = pr.at("lo").get<std::vector<double>>();
        sc.prior.hi = pr.at("hi").get<std::vector<double>>();
        if (sc.prior.dim() != basis_dim(basis))
            throw ValidationError("prior bounds must match the basis dimension");
        for (int c = 0; c < sc.prior.dim(); ++c)
            if (!(sc.prior.lo[c] < sc.prior.hi[c]))
                throw ValidationError("prior bounds must satisfy lo < hi componentwise");

        sc.estimator.particle_count = j.at("particle_count").get<std::size_t>();
        if (sc.estimator.particle_count < 1)
            throw ValidationError("particle_count must be >= 1");
        if (j.contains("estimator")) {
            const auto& e = j.at("estimator");
            sc.estimator.resample_threshold = e.value("resample_threshold", 0.5);
            sc.estimator.roughening = e.value("roughening", 0.01);
        }

        sc.likelihood.sigma = j.value("likelihood_sigma", std::sqrt(std::max(sc.noise.variance, 0.0)));
        if (!(sc.likelihood.sigma > 0.0))
            throw ValidationError("likelihood_sigma must be positive (set it explicitly for "
                                  "noise-free scenarios)");

        sc.requested_start = detail::vec3_from_json(j.at("initial_position"), "initial_position");
        sc.requested_target = detail::vec3_from_json(j.at("target_position"), "target_position");
        std::tie(sc.start, sc.start_snap_distance) = nearest_node(sc.grid, sc.requested_start);
        std::tie(sc.target, sc.target_snap_distance) = nearest_node(sc.grid, sc.requested_target);

        sc.confidence_threshold = j.at("confidence_threshold").get<double>();
        if (!(sc.confidence_threshold >= 0.0 && sc.confidence_threshold <= 1.0))
            throw ValidationError("confidence_threshold must be in [0,1]");
        sc.max_steps = j.value("max_steps", 200);
        if (sc.max_steps < 1) throw ValidationError("max_steps must be >= 1");

        sc.field_max = constrained_optimum(sc.truth, sc.grid).second;

        sc.default_planner.type = planner_from_name(j.value("planner", "dcee"));
        if (j.contains("dcee")) {
            const auto& d = j.at("dcee");
            sc.default_planner.dcee.m_samples = d.value("m_samples", 5);
            sc.default_planner.dcee.hypothetical = d.value("hypothetical", true);
            if (sc.default_planner.dcee.m_samples < 1)
                throw ValidationError("dcee.m_samples must be >= 1");
        }
        sc.default_planner.entropy.n_bins = 32;
        bool have_range = false;
        if (j.contains("entropy")) {
            const auto& e = j.at("entropy");
            sc.default_planner.entropy.n_bins = e.value("bins", 32);
            if (sc.default_planner.entropy.n_bins < 2)
                throw ValidationError("entropy.bins must be >= 2");
            if (e.contains("range")) {
                const auto& r = e.at("range");
                if (!r.is_array() || r.size() != 2)
                    throw ValidationError("entropy.range must be [lo, hi]");
                sc.default_planner.entropy.range_lo = r[0].get<double>();
                sc.default_planner.entropy.range_hi = r[1].get<double>();
                have_range = true;
            }
            sc.default_planner.entropy.hypothetical = e.value("hypothetical", false);
        }
        if (!have_range) {
            // default measurement range: noise floor below zero, field peak
            // plus noise headroom above
            const double s = sc.likelihood.sigma;
            sc.default_planner.entropy.range_lo = -3.0 * s;
            sc.default_planner.entropy.range_hi = sc.field_max + 3.0 * s;
        }
        if (!(sc.default_planner.entropy.range_lo < sc.default_planner.entropy.range_hi))
            throw ValidationError("entropy range must satisfy lo < hi");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario config: ") + e.what());
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(std::string("scenario config: ") + e.what());
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("scenario '" + path + "' is not valid JSON: " + e.what());
    }
    Scenario sc = scenario_from_json(j);
    if (sc.name == "unnamed") {
        const auto slash = path.find_last_of("/\\");
        std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
        const auto dot = base.find_last_of('.');
        sc.name = dot == std::string::npos ? base : base.substr(0, dot);
    }
    return sc;
}

/// Loads a bare parameter table: {"basis": "...", "theta": [...]}.
inline ThetaVector load_theta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open theta file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("theta file '" + path + "' is not valid JSON: " + e.what());
    }
    const std::string basis_str = j.value("basis", "reduced6");
    const BasisKind kind = basis_str == "full20" ? BasisKind::Full20 : BasisKind::Reduced6;
    return ThetaVector(kind, j.at("theta").get<std::vector<double>>());
}

}  // namespace viewplan

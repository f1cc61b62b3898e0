#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "viewplan/planner.hpp"

using namespace viewplan;

namespace {

PriorSpec box_prior(int dim, double lo, double hi) {
    PriorSpec p;
    p.lo.assign(static_cast<std::size_t>(dim), lo);
    p.hi.assign(static_cast<std::size_t>(dim), hi);
    return p;
}

/// Ensemble holding a single point mass.
ParticleEnsemble point_mass(const std::vector<double>& theta, std::size_t copies = 1) {
    ParticleEnsemble ens;
    ens.dim = static_cast<int>(theta.size());
    ens.count = copies;
    for (std::size_t i = 0; i < copies; ++i)
        ens.particles.insert(ens.particles.end(), theta.begin(), theta.end());
    ens.weights.assign(copies, 1.0 / static_cast<double>(copies));
    ens.log_weights.assign(copies, -std::log(static_cast<double>(copies)));
    return ens;
}

ParticleEnsemble two_particles(const std::vector<double>& a, const std::vector<double>& b) {
    ParticleEnsemble ens;
    ens.dim = static_cast<int>(a.size());
    ens.count = 2;
    ens.particles = a;
    ens.particles.insert(ens.particles.end(), b.begin(), b.end());
    ens.weights = {0.5, 0.5};
    ens.log_weights = {std::log(0.5), std::log(0.5)};
    return ens;
}

double field_value(const std::vector<double>& theta, const Vec3& p) {
    double phi[20] = {0.0};
    eval_basis(BasisKind::Reduced6, p, phi);
    double acc = 0.0;
    for (std::size_t c = 0; c < theta.size(); ++c) acc += phi[c] * theta[c];
    return acc;
}

}  // namespace

TEST_CASE("predictive moments anchors") {
    const std::vector<double> theta = {0.1, -0.2, 0.3, 0.4, -0.5, 0.6};
    const Vec3 p{1.0, -1.5, 2.0};

    SECTION("single particle: exact value, zero spread") {
        const auto [mean, var] = predictive_moments(point_mass(theta), BasisKind::Reduced6, p);
        REQUIRE(mean == Catch::Approx(field_value(theta, p)));
        REQUIRE(var == 0.0);
    }

    SECTION("symmetric pair: zero mean, squared-prediction spread") {
        std::vector<double> neg(theta);
        for (double& t : neg) t = -t;
        const auto [mean, var] = predictive_moments(two_particles(theta, neg),
                                                    BasisKind::Reduced6, p);
        REQUIRE(mean == Catch::Approx(0.0).margin(1e-12));
        const double c = field_value(theta, p);
        REQUIRE(var == Catch::Approx(c * c).epsilon(1e-12));
    }

    SECTION("uniform prior ensemble at the pole: variance is 81 * Var(theta_z2)") {
        Rng rng(12);
        const ParticleEnsemble ens = init_ensemble(box_prior(6, -3, 3), 100000, rng);
        const auto [mean, var] = predictive_moments(ens, BasisKind::Reduced6, {0, 0, 3});
        // phi = [0,0,0,9,0,0]: only the z^2 coefficient contributes, Var = 3
        REQUIRE(std::abs(mean) <= 0.3);
        REQUIRE(var == Catch::Approx(243.0).epsilon(0.05));
    }
}

TEST_CASE("mpc score is squared mean plus current spread") {
    const std::vector<double> theta = {-0.0714, 0.0842, 0.0329, 0.0914, 0.2443, 0.0275};
    const Vec3 p{2.1, 1.2, 1.76};

    const double point_score = mpc_score(point_mass(theta), BasisKind::Reduced6, p);
    const double c = field_value(theta, p);
    REQUIRE(point_score == Catch::Approx(c * c));

    std::vector<double> neg(theta);
    for (double& t : neg) t = -t;
    const ParticleEnsemble pair = two_particles(theta, neg);
    REQUIRE(mpc_score(pair, BasisKind::Reduced6, p) == Catch::Approx(c * c));

    // independent summation oracle on a random ensemble
    Rng rng(31);
    const ParticleEnsemble ens = init_ensemble(box_prior(6, -1, 1), 3000, rng);
    double phi[20];
    eval_basis(BasisKind::Reduced6, p, phi);
    double mean = 0.0;
    for (std::size_t i = 0; i < ens.count; ++i)
        mean += ens.weights[i] * detail::dot_theta_phi(ens.particle(i), phi, 6);
    double second = 0.0;
    for (std::size_t i = 0; i < ens.count; ++i) {
        const double v = detail::dot_theta_phi(ens.particle(i), phi, 6);
        second += ens.weights[i] * v * v;
    }
    // mean^2 + (second - mean^2) = second moment
    REQUIRE(mpc_score(ens, BasisKind::Reduced6, p) == Catch::Approx(second).epsilon(1e-10));
}

TEST_CASE("dcee score degeneracies") {
    const std::vector<double> theta = {0.2, -0.1, 0.05, 0.3, 0.15, -0.25};
    const Vec3 p{1.0, 1.0, 2.5};
    const LikelihoodSpec lik{0.7071};
    const double c = field_value(theta, p);

    SECTION("point mass: hypothetical updates cannot move the belief") {
        for (int m : {1, 5, 50}) {
            Rng rng(100 + m);
            const double s = dcee_score(point_mass(theta, 4), BasisKind::Reduced6, p, lik, m,
                                        true, rng);
            REQUIRE(s == Catch::Approx(c * c).epsilon(1e-10));
        }
    }

    SECTION("hypothetical=false collapses to the mpc score exactly") {
        Rng rng(7);
        ParticleEnsemble ens = init_ensemble(box_prior(6, -1, 1), 500, rng);
        Rng score_rng(8);
        REQUIRE(dcee_score(ens, BasisKind::Reduced6, p, lik, 5, false, score_rng) ==
                mpc_score(ens, BasisKind::Reduced6, p));
    }
}

TEST_CASE("law of total variance: expected hypothetical moments recover current spread") {
    Rng rng(404);
    const int m_samples = 2000;
    for (int trial = 0; trial < 6; ++trial) {
        ParticleEnsemble ens = init_ensemble(box_prior(6, -1.5, 1.5), 1500, rng);
        // make the weights non-trivial
        Measurement m;
        m.position = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.5, 2.5)};
        m.value = rng.uniform(-1, 1);
        m.detected = true;
        const LikelihoodSpec lik{0.9};
        bayes_update(ens, BasisKind::Reduced6, m, lik);

        const Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 2.5)};
        const auto [cur_mean, cur_var] = predictive_moments(ens, BasisKind::Reduced6, p);

        // replicate the hypothetical machinery sample by sample to split the
        // expectation into E[var_hyp] + Var[mean_hyp]
        const auto pred = detail::predicted_values(ens, BasisKind::Reduced6, p);
        const auto cum = detail::cumulative_weights(ens);
        std::vector<double> hyp_means, hyp_vars;
        hyp_means.reserve(m_samples);
        std::vector<double> hw(ens.count);
        for (int s = 0; s < m_samples; ++s) {
            const std::size_t pick = detail::sample_index(cum, rng.uniform());
            const double chat = pred[pick] + rng.normal(0.0, lik.sigma);
            double mx = -1e300;
            for (std::size_t i = 0; i < ens.count; ++i) {
                const double r = chat - pred[i];
                hw[i] = ens.log_weights[i] - r * r / (2 * lik.sigma * lik.sigma);
                mx = std::max(mx, hw[i]);
            }
            double sum = 0.0;
            for (auto& w : hw) {
                w = std::exp(w - mx);
                sum += w;
            }
            double hm = 0.0;
            for (std::size_t i = 0; i < ens.count; ++i) hm += hw[i] * pred[i];
            hm /= sum;
            double hv = 0.0;
            for (std::size_t i = 0; i < ens.count; ++i) {
                const double dev = pred[i] - hm;
                hv += hw[i] * dev * dev;
            }
            hv /= sum;
            hyp_means.push_back(hm);
            hyp_vars.push_back(hv);
        }
        double mean_of_means = 0.0, mean_of_vars = 0.0;
        for (int s = 0; s < m_samples; ++s) {
            mean_of_means += hyp_means[static_cast<std::size_t>(s)];
            mean_of_vars += hyp_vars[static_cast<std::size_t>(s)];
        }
        mean_of_means /= m_samples;
        mean_of_vars /= m_samples;
        double var_of_means = 0.0;
        for (double hm : hyp_means) var_of_means += (hm - mean_of_means) * (hm - mean_of_means);
        var_of_means /= m_samples;

        const double total = mean_of_vars + var_of_means;
        // Monte Carlo standard error of the combined statistic
        double se_acc = 0.0;
        for (int s = 0; s < m_samples; ++s) {
            const double w = hyp_vars[static_cast<std::size_t>(s)] +
                             (hyp_means[static_cast<std::size_t>(s)] - mean_of_means) *
                                 (hyp_means[static_cast<std::size_t>(s)] - mean_of_means);
            se_acc += (w - total) * (w - total);
        }
        const double se = std::sqrt(se_acc / m_samples / m_samples);
        REQUIRE(std::abs(total - cur_var) <= 3.0 * std::max(se, 1e-12));
    }
}

TEST_CASE("entropy score anchors") {
    const LikelihoodSpec tight{1e-6};

    SECTION("point predictive mass lands in one bin: zero entropy") {
        Rng rng(1);
        const std::vector<double> theta = {0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
        const double h = entropy_score(point_mass(theta, 8), BasisKind::Reduced6, {1, 1, 1},
                                       tight, 32, -2.0, 2.0, rng);
        REQUIRE(h == Catch::Approx(0.0).margin(1e-6));
    }

    SECTION("mass spread uniformly over bins approaches ln(n_bins)") {
        // 32 point predictions placed at the 32 bin centers, equal weights
        const int bins = 32;
        ParticleEnsemble ens;
        ens.dim = 6;
        ens.count = 32;
        for (int i = 0; i < bins; ++i) {
            // phi([0,0,z]) = [0,0,0,z^2,0,0]: prediction = theta3 * z^2; use z=1
            std::vector<double> th(6, 0.0);
            th[3] = -1.0 + (i + 0.5) * (2.0 / bins);
            ens.particles.insert(ens.particles.end(), th.begin(), th.end());
        }
        ens.weights.assign(32, 1.0 / 32.0);
        ens.log_weights.assign(32, std::log(1.0 / 32.0));
        Rng rng(2);
        const double h = entropy_score(ens, BasisKind::Reduced6, {0, 0, 1}, tight, bins,
                                       -1.0, 1.0, rng);
        REQUIRE(h == Catch::Approx(std::log(32.0)).margin(0.02));
    }

    SECTION("gaussian predictive matches the discretized differential entropy") {
        // single particle prediction 0 plus unit likelihood noise: N(0,1)
        const std::vector<double> zero(6, 0.0);
        Rng rng(3);
        const double w = 0.05;
        const int bins = 240;  // covers [-6, 6] at width 0.05
        const double h = entropy_score(point_mass(zero, 4), BasisKind::Reduced6, {1, 1, 1},
                                       LikelihoodSpec{1.0}, bins, -6.0, 6.0, rng);
        const double expected = 0.5 * std::log(2.0 * M_PI * M_E) - std::log(w);
        REQUIRE(h == Catch::Approx(expected).margin(0.05));
    }

    SECTION("widening the ensemble spread cannot decrease the entropy") {
        Rng rng(4);
        for (int trial = 0; trial < 10; ++trial) {
            ParticleEnsemble ens = init_ensemble(box_prior(6, -0.4, 0.4), 2000, rng);
            ParticleEnsemble wide = ens;
            const std::vector<double> mean = posterior_mean(ens);
            for (std::size_t i = 0; i < wide.count; ++i)
                for (int c = 0; c < 6; ++c) {
                    double& v = wide.particle(i)[c];
                    v = mean[static_cast<std::size_t>(c)] +
                        2.5 * (v - mean[static_cast<std::size_t>(c)]);
                }
            const Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 2.5)};
            Rng ra(1000 + trial), rb(1000 + trial);
            const double h_base = entropy_score(ens, BasisKind::Reduced6, p, LikelihoodSpec{0.2},
                                                64, -30.0, 30.0, ra);
            const double h_wide = entropy_score(wide, BasisKind::Reduced6, p, LikelihoodSpec{0.2},
                                                64, -30.0, 30.0, rb);
            REQUIRE(h_wide >= h_base - 0.02);
        }
    }
}

TEST_CASE("select_action picks the best successor and breaks ties fairly") {
    const GridDomain g = build_grid(3.0, 11, 12);
    const std::vector<double> truth = {-0.0714, 0.0842, 0.0329, 0.0914, 0.2443, 0.0275};
    const LikelihoodSpec lik{0.7071};

    SECTION("with a point-mass belief at the truth every planner exploits") {
        const ParticleEnsemble ens = point_mass(truth);
        const Viewpoint v = make_viewpoint(g, 4, 2);
        // brute-force oracle over the five successors
        double best = -1e300;
        for (const auto& [a, s] : reachable_set(g, v))
            best = std::max(best, field_value(truth, s.position));

        for (PlannerType type : {PlannerType::Dcee, PlannerType::Mpc}) {
            PlannerSpec spec;
            spec.type = type;
            EpisodeStreams streams(5);
            const ScoredAction sa = select_action(spec, g, v, ens, BasisKind::Reduced6, lik, 0,
                                                  streams);
            REQUIRE(field_value(truth, sa.successor.position) == Catch::Approx(best));
        }
    }

    SECTION("dominated stay is never selected") {
        // positive z^2 bowl, point mass: moving up is strictly best below the pole
        const std::vector<double> bowl = {0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
        const ParticleEnsemble ens = point_mass(bowl);
        PlannerSpec spec;
        spec.type = PlannerType::Mpc;
        for (int trial = 0; trial < 50; ++trial) {
            EpisodeStreams streams(static_cast<std::uint64_t>(trial));
            const ScoredAction sa = select_action(spec, g, make_viewpoint(g, 5, 2), ens,
                                                  BasisKind::Reduced6, lik, trial, streams);
            REQUIRE(sa.action == Action::Up);
        }
    }

    SECTION("exact score ties split uniformly across seeds") {
        // x^2 field at the equator's -x node: Stay and Down clamp to the same
        // successor, giving two identically scored candidates that dominate
        // the rest; the pick between them must be an unbiased coin
        const std::vector<double> ridge = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
        const ParticleEnsemble ens = point_mass(ridge);
        PlannerSpec spec;
        spec.type = PlannerType::Mpc;
        std::map<Action, int> counts;
        const int trials = 10000;
        for (int trial = 0; trial < trials; ++trial) {
            EpisodeStreams streams(static_cast<std::uint64_t>(trial));
            const ScoredAction sa = select_action(spec, g, make_viewpoint(g, 0, 6), ens,
                                                  BasisKind::Reduced6, lik, 0, streams);
            counts[sa.action] += 1;
        }
        REQUIRE(counts[Action::Up] == 0);
        REQUIRE(counts[Action::Left] == 0);
        REQUIRE(counts[Action::Right] == 0);
        const double se = std::sqrt(trials * 0.5 * 0.5);
        REQUIRE(std::abs(counts[Action::Stay] - trials / 2.0) <= 4.0 * se);
        REQUIRE(std::abs(counts[Action::Down] - trials / 2.0) <= 4.0 * se);
    }

    SECTION("scaling the belief leaves the selection unchanged") {
        std::vector<double> doubled(truth);
        for (double& t : doubled) t *= 2.0;
        PlannerSpec spec;
        spec.type = PlannerType::Mpc;
        for (int trial = 0; trial < 20; ++trial) {
            EpisodeStreams streams(static_cast<std::uint64_t>(trial));
            const Viewpoint v = make_viewpoint(g, static_cast<int>(trial % 11),
                                               static_cast<int>((3 * trial) % 12));
            const ScoredAction a = select_action(spec, g, v, point_mass(truth),
                                                 BasisKind::Reduced6, lik, 0, streams);
            const ScoredAction b = select_action(spec, g, v, point_mass(doubled),
                                                 BasisKind::Reduced6, lik, 0, streams);
            REQUIRE(a.action == b.action);
        }
    }

    SECTION("mpc reads the ensemble only through its current state") {
        Rng rng(77);
        ParticleEnsemble ens = init_ensemble(box_prior(6, -1, 1), 400, rng);
        const Vec3 p{1.4, -0.8, 2.2};
        const double before = mpc_score(ens, BasisKind::Reduced6, p);
        // a weight-preserving update (all particles duplicated) is a no-op
        for (std::size_t i = 1; i < ens.count; ++i)
            for (int c = 0; c < 6; ++c) ens.particle(i)[c] = ens.particle(0)[c];
        ParticleEnsemble dup = ens;
        const double base = mpc_score(dup, BasisKind::Reduced6, p);
        Measurement m;
        m.position = {0.5, 0.5, 1.0};
        double phi[20];
        eval_basis(BasisKind::Reduced6, m.position, phi);
        m.value = detail::dot_theta_phi(dup.particle(0), phi, 6);
        m.detected = true;
        bayes_update(dup, BasisKind::Reduced6, m, lik);
        REQUIRE(mpc_score(dup, BasisKind::Reduced6, p) == Catch::Approx(base).epsilon(1e-12));
        (void)before;
    }
}

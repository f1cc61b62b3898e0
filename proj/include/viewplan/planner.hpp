#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "viewplan/estimator.hpp"
#include "viewplan/geometry.hpp"
#include "viewplan/rng.hpp"

namespace viewplan {

enum class PlannerType { Dcee, Mpc, Entropy };

inline const char* planner_name(PlannerType t) {
    switch (t) {
        case PlannerType::Dcee: return "dcee";
        case PlannerType::Mpc: return "mpc";
        case PlannerType::Entropy: return "entropy";
    }
    return "?";
}

inline PlannerType planner_from_name(const std::string& s) {
    if (s == "dcee") return PlannerType::Dcee;
    if (s == "mpc") return PlannerType::Mpc;
    if (s == "entropy") return PlannerType::Entropy;
    throw ValidationError("unknown planner '" + s + "' (expected dcee|mpc|entropy)");
}

struct DceeParams {
    int m_samples = 5;
    bool hypothetical = true;
};

struct EntropyParams {
    int n_bins = 32;
    double range_lo = 0.0;
    double range_hi = 1.0;
    bool hypothetical = false;
};

struct PlannerSpec {
    PlannerType type = PlannerType::Dcee;
    DceeParams dcee;
    EntropyParams entropy;
};

struct ScoredAction {
    Action action = Action::Stay;
    Viewpoint successor;
    double score = 0.0;
};

/// Mean and variance of the predicted field value phi(p)' theta under the
/// ensemble. Parameter-induced spread only; measurement noise is a candidate-
/// independent additive constant for the quadratic objectives and is left out.
inline std::pair<double, double> predictive_moments(const ParticleEnsemble& ens, BasisKind basis,
                                                    const Vec3& p) {
    double phi[20];
    eval_basis(basis, p, phi);
    const int d = basis_dim(basis);
    double mean = 0.0;
    for (std::size_t i = 0; i < ens.count; ++i)
        mean += ens.weights[i] * detail::dot_theta_phi(ens.particle(i), phi, d);
    double var = 0.0;
    for (std::size_t i = 0; i < ens.count; ++i) {
        const double dev = detail::dot_theta_phi(ens.particle(i), phi, d) - mean;
        var += ens.weights[i] * dev * dev;
    }
    return {mean, var};
}

/// Exploit-only objective: squared believed value plus the current predictive
/// spread at the candidate, both under today's belief. No reweighting is
/// involved, so the score sees the ensemble only through its current state.
inline double mpc_score(const ParticleEnsemble& ens, BasisKind basis, const Vec3& p) {
    const auto [mean, var] = predictive_moments(ens, basis, p);
    return mean * mean + var;
}

namespace detail {

inline std::vector<double> predicted_values(const ParticleEnsemble& ens, BasisKind basis,
                                            const Vec3& p) {
    double phi[20];
    eval_basis(basis, p, phi);
    const int d = basis_dim(basis);
    std::vector<double> pred(ens.count);
    for (std::size_t i = 0; i < ens.count; ++i)
        pred[i] = dot_theta_phi(ens.particle(i), phi, d);
    return pred;
}

inline std::vector<double> cumulative_weights(const ParticleEnsemble& ens) {
    std::vector<double> cum(ens.count);
    double acc = 0.0;
    for (std::size_t i = 0; i < ens.count; ++i) {
        acc += ens.weights[i];
        cum[i] = acc;
    }
    cum.back() = 1.0;
    return cum;
}

inline std::size_t sample_index(const std::vector<double>& cum, double u) {
    return static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
}

}  // namespace detail

/// Explore-exploit objective: Monte Carlo expectation, over predicted
/// measurements drawn from the posterior predictive at the candidate, of the
/// squared mean plus spread of the field value under the one-step
/// hypothetically reweighted belief. Weights only; no resampling; the
/// ensemble is untouched. With hypothetical=false this collapses to
/// mpc_score exactly.
inline double dcee_score(const ParticleEnsemble& ens, BasisKind basis, const Vec3& p,
                         const LikelihoodSpec& lik, int m_samples, bool hypothetical, Rng& rng) {
    if (!hypothetical) return mpc_score(ens, basis, p);
    if (m_samples < 1) throw ValidationError("dcee m_samples must be >= 1");

    const std::vector<double> pred = detail::predicted_values(ens, basis, p);
    const std::vector<double> cum = detail::cumulative_weights(ens);
    const double inv2s2 = 1.0 / (2.0 * lik.sigma * lik.sigma);
    const std::size_t n = ens.count;

    std::vector<double> hyp(n);
    double acc = 0.0;
    for (int s = 0; s < m_samples; ++s) {
        const std::size_t pick = detail::sample_index(cum, rng.uniform());
        const double chat = pred[pick] + rng.normal(0.0, lik.sigma);

        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double r = chat - pred[i];
            hyp[i] = ens.log_weights[i] - r * r * inv2s2;
            mx = std::max(mx, hyp[i]);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            hyp[i] = std::exp(hyp[i] - mx);
            sum += hyp[i];
        }
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += hyp[i] * pred[i];
        mean /= sum;
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = pred[i] - mean;
            var += hyp[i] * dev * dev;
        }
        var /= sum;
        acc += mean * mean + var;
    }
    return acc / static_cast<double>(m_samples);
}

/// Explore-only objective: Shannon entropy (natural log) of the predicted
/// measurement distribution at the candidate, estimated by histogramming
/// max(count, 4096) predictive draws (particle chosen by weight, plus
/// likelihood noise) into n_bins equal bins over [range_lo, range_hi].
/// Draws outside the range are clamped into the edge bins so all probability
/// mass is counted; empty bins contribute nothing.
inline double entropy_score(const ParticleEnsemble& ens, BasisKind basis, const Vec3& p,
                            const LikelihoodSpec& lik, int n_bins, double range_lo,
                            double range_hi, Rng& rng) {
    if (n_bins < 2) throw ValidationError("entropy needs at least 2 bins");
    if (!(range_lo < range_hi)) throw ValidationError("entropy range must satisfy lo < hi");

    const std::vector<double> pred = detail::predicted_values(ens, basis, p);
    const std::vector<double> cum = detail::cumulative_weights(ens);
    const std::size_t draws = std::max<std::size_t>(ens.count, 4096);
    const double bin_width = (range_hi - range_lo) / static_cast<double>(n_bins);

    std::vector<std::size_t> hist(static_cast<std::size_t>(n_bins), 0);
    for (std::size_t s = 0; s < draws; ++s) {
        const std::size_t pick = detail::sample_index(cum, rng.uniform());
        const double v = pred[pick] + rng.normal(0.0, lik.sigma);
        int b = static_cast<int>((v - range_lo) / bin_width);
        b = std::clamp(b, 0, n_bins - 1);
        ++hist[static_cast<std::size_t>(b)];
    }
    double h = 0.0;
    for (std::size_t b = 0; b < hist.size(); ++b) {
        if (hist[b] == 0) continue;
        const double q = static_cast<double>(hist[b]) / static_cast<double>(draws);
        h -= q * std::log(q);
    }
    return h;
}

inline double score_candidate(const PlannerSpec& spec, const ParticleEnsemble& ens,
                              BasisKind basis, const Vec3& p, const LikelihoodSpec& lik,
                              Rng& rng) {
    switch (spec.type) {
        case PlannerType::Mpc: return mpc_score(ens, basis, p);
        case PlannerType::Dcee:
            return dcee_score(ens, basis, p, lik, spec.dcee.m_samples, spec.dcee.hypothetical, rng);
        case PlannerType::Entropy: {
            if (!spec.entropy.hypothetical)
                return entropy_score(ens, basis, p, lik, spec.entropy.n_bins,
                                     spec.entropy.range_lo, spec.entropy.range_hi, rng);
            // hypothetical reading: average entropy after a one-step reweight,
            // over predicted measurements (same stream discipline as dcee)
            ParticleEnsemble hyp = ens;
            Rng draw_rng(rng.next_u64());
            const std::vector<double> pred = detail::predicted_values(ens, basis, p);
            const std::vector<double> cum = detail::cumulative_weights(ens);
            const std::size_t pick = detail::sample_index(cum, draw_rng.uniform());
            Measurement m;
            m.value = pred[pick] + draw_rng.normal(0.0, lik.sigma);
            m.detected = true;
            m.position = p;
            bayes_update(hyp, basis, m, lik);
            return entropy_score(hyp, basis, p, lik, spec.entropy.n_bins, spec.entropy.range_lo,
                                 spec.entropy.range_hi, draw_rng);
        }
    }
    throw ValidationError("unreachable planner type");
}

/// Scores every successor of the current viewpoint and returns an argmax.
/// Each candidate gets its own derived stream, so evaluation order cannot
/// change the outcome; scores tied within 1e-12 are broken uniformly at
/// random from the step's tie stream.
inline ScoredAction select_action(const PlannerSpec& spec, const GridDomain& grid,
                                  const Viewpoint& current, const ParticleEnsemble& ens,
                                  BasisKind basis, const LikelihoodSpec& lik, int step,
                                  const EpisodeStreams& streams) {
    const auto candidates = reachable_set(grid, current);
    std::vector<double> scores(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        Rng rng = streams.candidate(static_cast<std::uint64_t>(step), i);
        scores[i] = score_candidate(spec, ens, basis, candidates[i].second.position, lik, rng);
    }
    const double best = *std::max_element(scores.begin(), scores.end());
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] >= best - 1e-12) tied.push_back(i);
    std::size_t pick = tied.front();
    if (tied.size() > 1) {
        Rng tie_rng = streams.tie_breaker(static_cast<std::uint64_t>(step));
        pick = tied[tie_rng.uniform_index(tied.size())];
    }
    return ScoredAction{candidates[pick].first, candidates[pick].second, scores[pick]};
}

}  // namespace viewplan

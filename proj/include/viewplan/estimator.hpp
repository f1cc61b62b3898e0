#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "viewplan/basis.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/rng.hpp"
#include "viewplan/sensor.hpp"

namespace viewplan {

/// Gaussian measurement likelihood with residual standard deviation sigma.
struct LikelihoodSpec {
    double sigma = 1.0;
};

/// Per-coefficient uniform prior bounds.
struct PriorSpec {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }
};

/// Weighted sample cloud over parameter space. Particles are stored row-major
/// (count x dim). Normalized weights and their logs are kept in lockstep:
/// weights always sum to 1, log_weights are the logs of those weights and are
/// the accumulator for likelihood updates (max-subtracted before
/// exponentiation, so products of many tight likelihoods cannot underflow to
/// an all-zero weight vector).
struct ParticleEnsemble {
    int dim = 0;
    std::size_t count = 0;
    std::vector<double> particles;     // count * dim
    std::vector<double> weights;       // normalized
    std::vector<double> log_weights;   // log of normalized weights
    int degeneracy_resets = 0;

    double* particle(std::size_t i) { return particles.data() + i * static_cast<std::size_t>(dim); }
    const double* particle(std::size_t i) const {
        return particles.data() + i * static_cast<std::size_t>(dim);
    }
};

inline ParticleEnsemble init_ensemble(const PriorSpec& prior, std::size_t n, Rng& rng) {
    if (n < 1) throw InvalidBoundsError("ensemble needs at least one particle");
    const int d = prior.dim();
    if (d < 1 || prior.hi.size() != prior.lo.size())
        throw InvalidBoundsError("prior bounds are empty or mismatched");
    for (int c = 0; c < d; ++c)
        if (!(prior.lo[c] < prior.hi[c]))
            throw InvalidBoundsError("prior bounds must satisfy lo < hi in every coordinate");

    ParticleEnsemble ens;
    ens.dim = d;
    ens.count = n;
    ens.particles.resize(n * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c)
            ens.particles[i * static_cast<std::size_t>(d) + c] = rng.uniform(prior.lo[c], prior.hi[c]);
    ens.weights.assign(n, 1.0 / static_cast<double>(n));
    ens.log_weights.assign(n, -std::log(static_cast<double>(n)));
    return ens;
}

namespace detail {

inline double dot_theta_phi(const double* theta, const double* phi, int d) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) acc += theta[c] * phi[c];
    return acc;
}

/// Renormalizes from log_weights; returns true if the weight mass degenerated
/// (non-finite or all-zero) and had to be reset to uniform.
inline bool renormalize(ParticleEnsemble& ens) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double lw : ens.log_weights) mx = std::max(mx, lw);
    double sum = 0.0;
    if (std::isfinite(mx)) {
        for (std::size_t i = 0; i < ens.count; ++i) {
            ens.weights[i] = std::exp(ens.log_weights[i] - mx);
            sum += ens.weights[i];
        }
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        const double u = 1.0 / static_cast<double>(ens.count);
        ens.weights.assign(ens.count, u);
        ens.log_weights.assign(ens.count, std::log(u));
        ++ens.degeneracy_resets;
        return true;
    }
    for (std::size_t i = 0; i < ens.count; ++i) {
        ens.weights[i] /= sum;
        ens.log_weights[i] = ens.weights[i] > 0.0 ? std::log(ens.weights[i])
                                                  : -std::numeric_limits<double>::infinity();
    }
    return false;
}

}  // namespace detail

/// Reweights the ensemble by the measurement likelihood. A detected reading
/// scores each particle's predicted field value against the observed one; a
/// missed reading carries a particle-independent pure-noise likelihood, so
/// the weights are left unchanged. Returns true when the update degenerated
/// and weights were reset to uniform.
inline bool bayes_update(ParticleEnsemble& ens, BasisKind basis, const Measurement& m,
                         const LikelihoodSpec& lik) {
    if (!(lik.sigma > 0.0)) throw ValidationError("likelihood sigma must be positive");
    if (!std::isfinite(m.value)) throw ValidationError("measurement value must be finite");
    if (!m.detected) return false;
    double phi[20];
    eval_basis(basis, m.position, phi);
    const int d = basis_dim(basis);
    const double inv2s2 = 1.0 / (2.0 * lik.sigma * lik.sigma);
    for (std::size_t i = 0; i < ens.count; ++i) {
        const double r = m.value - detail::dot_theta_phi(ens.particle(i), phi, d);
        ens.log_weights[i] -= r * r * inv2s2;
    }
    return detail::renormalize(ens);
}

/// 1 / sum(w^2); ranges from 1 (degenerate) to count (uniform).
inline double effective_sample_size(const ParticleEnsemble& ens) {
    double s = 0.0;
    for (double w : ens.weights) s += w * w;
    return 1.0 / s;
}

inline std::vector<double> posterior_mean(const ParticleEnsemble& ens) {
    std::vector<double> mean(static_cast<std::size_t>(ens.dim), 0.0);
    for (std::size_t i = 0; i < ens.count; ++i) {
        const double w = ens.weights[i];
        const double* th = ens.particle(i);
        for (int c = 0; c < ens.dim; ++c) mean[c] += w * th[c];
    }
    return mean;
}

/// Weighted covariance about the weighted mean, row-major dim x dim.
inline std::vector<double> posterior_cov(const ParticleEnsemble& ens) {
    const std::vector<double> mean = posterior_mean(ens);
    const int d = ens.dim;
    std::vector<double> cov(static_cast<std::size_t>(d) * d, 0.0);
    std::vector<double> centered(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < ens.count; ++i) {
        const double w = ens.weights[i];
        const double* th = ens.particle(i);
        for (int c = 0; c < d; ++c) centered[c] = th[c] - mean[c];
        for (int r = 0; r < d; ++r)
            for (int c = r; c < d; ++c) cov[r * d + c] += w * centered[r] * centered[c];
    }
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < r; ++c) cov[r * d + c] = cov[c * d + r];
    return cov;
}

inline double posterior_trace(const ParticleEnsemble& ens) {
    const std::vector<double> mean = posterior_mean(ens);
    double tr = 0.0;
    for (std::size_t i = 0; i < ens.count; ++i) {
        const double w = ens.weights[i];
        const double* th = ens.particle(i);
        for (int c = 0; c < ens.dim; ++c) {
            const double dlt = th[c] - mean[c];
            tr += w * dlt * dlt;
        }
    }
    return tr;
}

/// Systematic resampling to equal weights, with optional roughening: each
/// offspring coordinate receives zero-mean Gaussian jitter with standard
/// deviation roughening_scale times the pre-resampling weighted std. The
/// jitter keeps a static-parameter ensemble from collapsing onto a handful
/// of duplicated lineages.
inline void resample(ParticleEnsemble& ens, Rng& rng, double roughening_scale) {
    if (roughening_scale < 0.0) throw ValidationError("roughening scale must be >= 0");
    const int d = ens.dim;
    const std::size_t n = ens.count;

    std::vector<double> sigma(static_cast<std::size_t>(d), 0.0);
    if (roughening_scale > 0.0) {
        const std::vector<double> mean = posterior_mean(ens);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = ens.weights[i];
            const double* th = ens.particle(i);
            for (int c = 0; c < d; ++c) {
                const double dlt = th[c] - mean[c];
                sigma[c] += w * dlt * dlt;
            }
        }
        for (int c = 0; c < d; ++c) sigma[c] = roughening_scale * std::sqrt(sigma[c]);
    }

    std::vector<double> fresh(n * static_cast<std::size_t>(d));
    const double u0 = rng.uniform() / static_cast<double>(n);
    double cum = ens.weights[0];
    std::size_t src = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double u = u0 + static_cast<double>(j) / static_cast<double>(n);
        while (u > cum && src + 1 < n) cum += ens.weights[++src];
        const double* from = ens.particle(src);
        double* to = fresh.data() + j * static_cast<std::size_t>(d);
        for (int c = 0; c < d; ++c) to[c] = from[c];
    }
    if (roughening_scale > 0.0) {
        for (std::size_t j = 0; j < n; ++j) {
            double* to = fresh.data() + j * static_cast<std::size_t>(d);
            for (int c = 0; c < d; ++c)
                if (sigma[c] > 0.0) to[c] += rng.normal(0.0, sigma[c]);
        }
    }
    ens.particles.swap(fresh);
    const double u = 1.0 / static_cast<double>(n);
    ens.weights.assign(n, u);
    ens.log_weights.assign(n, std::log(u));
}

/// Optional debug dump: one particle per row plus its weight.
inline void dump_ensemble_csv(const ParticleEnsemble& ens, std::ostream& out) {
    for (int c = 0; c < ens.dim; ++c) out << "theta" << c << ",";
    out << "weight\n";
    char buf[64];
    for (std::size_t i = 0; i < ens.count; ++i) {
        const double* th = ens.particle(i);
        for (int c = 0; c < ens.dim; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g,", th[c]);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.17g\n", ens.weights[i]);
        out << buf;
    }
}

}  // namespace viewplan

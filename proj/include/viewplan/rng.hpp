#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace viewplan {

/// splitmix64 step; used both as a stream-seed mixer and for key derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from a parent key and a tag tuple. Order-sensitive.
inline std::uint64_t derive_seed(std::uint64_t key) { return splitmix64(key); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t key, std::uint64_t tag, Rest... rest) {
    std::uint64_t mixed = splitmix64(key) ^ (tag * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL);
    return derive_seed(mixed, rest...);
}

/// Deterministic random stream. Draw helpers avoid std::*_distribution so the
/// byte-level output depends only on the seed, not on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform index in [0, n).
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    /// Standard normal via Box-Muller; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Per-episode random streams.
///
/// The sensor and estimator streams are long-lived and consumed sequentially,
/// and are derived from the episode seed alone: two planners run on the same
/// seed see identical noise and identical initial ensembles. Planner streams
/// are derived fresh per (step, candidate), so candidate scoring can run in
/// any order (or in parallel) without changing results.
class EpisodeStreams {
    static constexpr std::uint64_t kSensorTag = 0x53454e53ULL;
    static constexpr std::uint64_t kEstimatorTag = 0x45535449ULL;
    static constexpr std::uint64_t kPlannerTag = 0x504c414eULL;
    static constexpr std::uint64_t kTieTag = 0x54494530ULL;

    std::uint64_t key_;

public:
    explicit EpisodeStreams(std::uint64_t episode_seed)
        : key_(episode_seed),
          sensor(derive_seed(episode_seed, kSensorTag)),
          estimator(derive_seed(episode_seed, kEstimatorTag)) {}

    Rng candidate(std::uint64_t step, std::uint64_t candidate_index) const {
        return Rng(derive_seed(key_, kPlannerTag, step, candidate_index));
    }

    Rng tie_breaker(std::uint64_t step) const { return Rng(derive_seed(key_, kTieTag, step)); }

    Rng sensor;
    Rng estimator;
};

}  // namespace viewplan

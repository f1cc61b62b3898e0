#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "viewplan/errors.hpp"
#include "viewplan/vec3.hpp"

namespace viewplan {

/// Hemispherical operating domain discretized as an elevation x azimuth
/// lattice. Elevation spans [0, pi/2] inclusive (equator to pole), azimuth
/// spans [0, 2*pi) and wraps.
struct GridDomain {
    double radius = 1.0;
    int n_elev = 2;
    int n_azim = 2;
    double elev_min = 0.0;
    double elev_max = M_PI / 2.0;
    double azim_min = 0.0;
    double azim_max = 2.0 * M_PI;

    double elev_step() const { return (elev_max - elev_min) / static_cast<double>(n_elev - 1); }
    double azim_step() const { return (azim_max - azim_min) / static_cast<double>(n_azim); }
    int size() const { return n_elev * n_azim; }
};

struct Viewpoint {
    int elev_idx = 0;
    int azim_idx = 0;
    Vec3 position{0.0, 0.0, 0.0};

    bool operator==(const Viewpoint& other) const {
        return elev_idx == other.elev_idx && azim_idx == other.azim_idx;
    }
};

enum class Action { Stay, Up, Down, Left, Right };

constexpr std::array<Action, 5> kAllActions = {Action::Stay, Action::Up, Action::Down,
                                               Action::Left, Action::Right};

inline const char* action_name(Action a) {
    switch (a) {
        case Action::Stay: return "stay";
        case Action::Up: return "up";
        case Action::Down: return "down";
        case Action::Left: return "left";
        case Action::Right: return "right";
    }
    return "?";
}

inline GridDomain build_grid(double radius, int n_elev, int n_azim) {
    if (!(radius > 0.0)) throw InvalidDimensionError("grid radius must be positive");
    if (n_elev < 2) throw InvalidDimensionError("grid needs at least 2 elevation rows");
    if (n_azim < 2) throw InvalidDimensionError("grid needs at least 2 azimuth columns");
    GridDomain g;
    g.radius = radius;
    g.n_elev = n_elev;
    g.n_azim = n_azim;
    return g;
}

inline Vec3 to_cartesian(const GridDomain& grid, int elev_idx, int azim_idx) {
    if (elev_idx < 0 || elev_idx >= grid.n_elev || azim_idx < 0 || azim_idx >= grid.n_azim)
        throw IndexOutOfRangeError("grid index out of range");
    const double phi = grid.elev_min + grid.elev_step() * elev_idx;
    const double psi = grid.azim_min + grid.azim_step() * azim_idx;
    return {grid.radius * std::cos(phi) * std::cos(psi),
            grid.radius * std::cos(phi) * std::sin(psi),
            grid.radius * std::sin(phi)};
}

inline Viewpoint make_viewpoint(const GridDomain& grid, int elev_idx, int azim_idx) {
    return Viewpoint{elev_idx, azim_idx, to_cartesian(grid, elev_idx, azim_idx)};
}

/// One grid transition. Elevation clamps at the equator and pole rows (a
/// clamped move returns the viewpoint unchanged), azimuth wraps modulo
/// n_azim, so the result is always inside the domain.
inline Viewpoint apply_action(const GridDomain& grid, const Viewpoint& v, Action a) {
    int e = v.elev_idx;
    int z = v.azim_idx;
    switch (a) {
        case Action::Stay: return v;
        case Action::Up:
            if (e == grid.n_elev - 1) return v;
            ++e;
            break;
        case Action::Down:
            if (e == 0) return v;
            --e;
            break;
        case Action::Left: z = (z - 1 + grid.n_azim) % grid.n_azim; break;
        case Action::Right: z = (z + 1) % grid.n_azim; break;
    }
    return make_viewpoint(grid, e, z);
}

/// All five (action, successor) pairs, in the fixed enum order. Clamped moves
/// are retained so every action has a defined successor.
inline std::vector<std::pair<Action, Viewpoint>> reachable_set(const GridDomain& grid,
                                                               const Viewpoint& v) {
    std::vector<std::pair<Action, Viewpoint>> out;
    out.reserve(kAllActions.size());
    for (Action a : kAllActions) out.emplace_back(a, apply_action(grid, v, a));
    return out;
}

/// Nearest grid node to an arbitrary point (Euclidean), plus the snap
/// distance. Ties resolve to the smallest (elev_idx, azim_idx).
inline std::pair<Viewpoint, double> nearest_node(const GridDomain& grid, const Vec3& p) {
    Viewpoint best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.n_elev; ++i) {
        for (int j = 0; j < grid.n_azim; ++j) {
            const Vec3 node = to_cartesian(grid, i, j);
            const double d = distance(node, p);
            if (d < best_d) {
                best_d = d;
                best = Viewpoint{i, j, node};
            }
        }
    }
    return {best, best_d};
}

}  // namespace viewplan

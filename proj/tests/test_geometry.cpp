#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "viewplan/geometry.hpp"

using namespace viewplan;

TEST_CASE("build_grid produces the requested lattice on the sphere") {
    const GridDomain g = build_grid(3.0, 11, 12);
    REQUIRE(g.size() == 132);
    for (int i = 0; i < g.n_elev; ++i)
        for (int j = 0; j < g.n_azim; ++j)
            REQUIRE(norm(to_cartesian(g, i, j)) == Catch::Approx(3.0).epsilon(1e-9));

    const GridDomain ws = build_grid(0.37, 11, 21);
    REQUIRE(ws.size() == 231);
    for (int i = 0; i < ws.n_elev; ++i)
        for (int j = 0; j < ws.n_azim; ++j)
            REQUIRE(norm(to_cartesian(ws, i, j)) == Catch::Approx(0.37).epsilon(1e-9));

    const GridDomain tiny = build_grid(1.0, 2, 2);
    REQUIRE(tiny.size() == 4);
    REQUIRE(to_cartesian(tiny, 0, 0)[2] == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(to_cartesian(tiny, 1, 0)[2] == Catch::Approx(1.0));
}

TEST_CASE("build_grid rejects degenerate dimensions") {
    REQUIRE_THROWS_AS(build_grid(0.0, 11, 12), InvalidDimensionError);
    REQUIRE_THROWS_AS(build_grid(-1.0, 11, 12), InvalidDimensionError);
    REQUIRE_THROWS_AS(build_grid(1.0, 1, 12), InvalidDimensionError);
    REQUIRE_THROWS_AS(build_grid(1.0, 11, 1), InvalidDimensionError);
}

TEST_CASE("to_cartesian anchors") {
    const GridDomain g = build_grid(2.0, 11, 12);
    // pole: any azimuth maps to [0,0,r]
    for (int j = 0; j < 12; ++j) {
        const Vec3 p = to_cartesian(g, 10, j);
        REQUIRE(p[0] == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(p[1] == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(p[2] == Catch::Approx(2.0));
    }
    const Vec3 equator = to_cartesian(g, 0, 0);
    REQUIRE(equator[0] == Catch::Approx(2.0));
    REQUIRE(equator[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(equator[2] == Catch::Approx(0.0).margin(1e-12));
    const Vec3 quarter = to_cartesian(g, 0, 3);  // azimuth pi/2
    REQUIRE(quarter[0] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(quarter[1] == Catch::Approx(2.0));

    REQUIRE_THROWS_AS(to_cartesian(g, 11, 0), IndexOutOfRangeError);
    REQUIRE_THROWS_AS(to_cartesian(g, 0, 12), IndexOutOfRangeError);
    REQUIRE_THROWS_AS(to_cartesian(g, -1, 0), IndexOutOfRangeError);
}

TEST_CASE("apply_action clamps elevation and wraps azimuth") {
    const GridDomain g = build_grid(3.0, 11, 12);
    const Viewpoint pole = make_viewpoint(g, 10, 4);
    REQUIRE(apply_action(g, pole, Action::Up) == pole);
    const Viewpoint equator = make_viewpoint(g, 0, 4);
    REQUIRE(apply_action(g, equator, Action::Down) == equator);

    const Viewpoint edge = make_viewpoint(g, 5, 11);
    REQUIRE(apply_action(g, edge, Action::Right).azim_idx == 0);
    const Viewpoint origin_col = make_viewpoint(g, 5, 0);
    REQUIRE(apply_action(g, origin_col, Action::Left).azim_idx == 11);

    const Viewpoint v = make_viewpoint(g, 3, 7);
    REQUIRE(apply_action(g, v, Action::Stay) == v);
}

TEST_CASE("reachable_set always yields five defined successors") {
    const GridDomain g = build_grid(3.0, 11, 12);

    const auto interior = reachable_set(g, make_viewpoint(g, 5, 3));
    REQUIRE(interior.size() == 5);
    std::set<std::pair<int, int>> distinct;
    for (const auto& [a, s] : interior) distinct.insert({s.elev_idx, s.azim_idx});
    REQUIRE(distinct.size() == 5);

    const auto at_pole = reachable_set(g, make_viewpoint(g, 10, 3));
    REQUIRE(at_pole[1].first == Action::Up);
    REQUIRE(at_pole[1].second == make_viewpoint(g, 10, 3));

    // exhaustive: every viewpoint has exactly 5 pairs, all on the grid
    for (int i = 0; i < g.n_elev; ++i)
        for (int j = 0; j < g.n_azim; ++j)
            REQUIRE(reachable_set(g, make_viewpoint(g, i, j)).size() == 5);
}

TEST_CASE("closure: actions preserve membership and radius") {
    const GridDomain g = build_grid(3.0, 11, 12);
    for (int i = 0; i < g.n_elev; ++i) {
        for (int j = 0; j < g.n_azim; ++j) {
            const Viewpoint v = make_viewpoint(g, i, j);
            for (Action a : kAllActions) {
                const Viewpoint s = apply_action(g, v, a);
                REQUIRE(s.elev_idx >= 0);
                REQUIRE(s.elev_idx < g.n_elev);
                REQUIRE(s.azim_idx >= 0);
                REQUIRE(s.azim_idx < g.n_azim);
                REQUIRE(norm(s.position) == Catch::Approx(3.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("azimuth wrap and elevation clamp round trips") {
    const GridDomain g = build_grid(3.0, 11, 12);
    Viewpoint v = make_viewpoint(g, 4, 9);
    for (int k = 0; k < g.n_azim; ++k) v = apply_action(g, v, Action::Right);
    REQUIRE(v == make_viewpoint(g, 4, 9));

    for (int j = 0; j < g.n_azim; ++j) {
        Viewpoint w = make_viewpoint(g, 0, j);
        for (int k = 0; k < g.n_elev; ++k) w = apply_action(g, w, Action::Up);
        REQUIRE(w.elev_idx == g.n_elev - 1);
    }
}

TEST_CASE("nearest_node snaps off-lattice points") {
    const GridDomain g = build_grid(3.0, 11, 12);
    const auto [vp, d] = nearest_node(g, Vec3{-2.0175, -0.6555, 2.1213});
    REQUIRE(vp.elev_idx == 5);
    REQUIRE(vp.azim_idx == 7);
    REQUIRE(d == Catch::Approx(0.4435).margin(1e-3));

    const auto [exact, d0] = nearest_node(g, to_cartesian(g, 2, 2));
    REQUIRE(exact == make_viewpoint(g, 2, 2));
    REQUIRE(d0 == Catch::Approx(0.0).margin(1e-12));
}

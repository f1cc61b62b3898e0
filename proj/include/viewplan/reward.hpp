#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "viewplan/basis.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/geometry.hpp"
#include "viewplan/vec3.hpp"

namespace viewplan {

/// Confidence field C(p, theta) = phi(p)' theta.
struct RewardModel {
    BasisKind basis = BasisKind::Reduced6;
    ThetaVector theta;

    RewardModel() = default;
    RewardModel(BasisKind b, ThetaVector t) : basis(b), theta(std::move(t)) {
        if (theta.kind != basis || theta.dim() != basis_dim(basis))
            throw InvalidDimensionError("reward model basis and theta disagree");
    }
};

inline double reward(const RewardModel& model, const Vec3& p) {
    double phi[20];
    eval_basis(model.basis, p, phi);
    const int d = basis_dim(model.basis);
    double acc = 0.0;
    for (int i = 0; i < d; ++i) acc += phi[i] * model.theta.coeffs[i];
    return acc;
}

/// Analytic field gradient dC/dp.
inline Vec3 reward_gradient(const RewardModel& model, const Vec3& p) {
    Vec3 grads[20];
    basis_gradients(model.basis, p, grads);
    const int d = basis_dim(model.basis);
    Vec3 g{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) {
        const double t = model.theta.coeffs[i];
        g[0] += t * grads[i][0];
        g[1] += t * grads[i][1];
        g[2] += t * grads[i][2];
    }
    return g;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Analytic field Hessian d2C/dp2 (symmetric 3x3).
inline Mat3 reward_hessian(const RewardModel& model, const Vec3& p) {
    const double x = p[0], y = p[1], z = p[2];
    const std::vector<double>& t = model.theta.coeffs;
    double hxx = 0, hyy = 0, hzz = 0, hxy = 0, hxz = 0, hyz = 0;
    if (model.basis == BasisKind::Reduced6) {
        // [z^2y, x^2, y^2, z^2, yz, xz]
        hxx = 2.0 * t[1];
        hyy = 2.0 * t[2];
        hzz = 2.0 * t[0] * y + 2.0 * t[3];
        hxy = 0.0;
        hxz = t[5];
        hyz = 2.0 * t[0] * z + t[4];
    } else {
        hxx = 6.0 * t[1] * x + 2.0 * t[5] * y + 2.0 * t[6] * z + 2.0 * t[11];
        hyy = 6.0 * t[2] * y + 2.0 * t[8] * x + 2.0 * t[7] * z + 2.0 * t[12];
        hzz = 6.0 * t[3] * z + 2.0 * t[9] * x + 2.0 * t[10] * y + 2.0 * t[13];
        hxy = t[4] * z + 2.0 * t[5] * x + 2.0 * t[8] * y + t[14];
        hxz = t[4] * y + 2.0 * t[6] * x + 2.0 * t[9] * z + t[16];
        hyz = t[4] * x + 2.0 * t[7] * y + 2.0 * t[10] * z + t[15];
    }
    return {{{hxx, hxy, hxz}, {hxy, hyy, hyz}, {hxz, hyz, hzz}}};
}

/// Eigenvalues of a symmetric 3x3 matrix, ascending (closed-form).
inline std::array<double, 3> symmetric_eigenvalues(const Mat3& m) {
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    const double tr = m[0][0] + m[1][1] + m[2][2];
    if (p1 == 0.0) {
        std::array<double, 3> ev{m[0][0], m[1][1], m[2][2]};
        std::sort(ev.begin(), ev.end());
        return ev;
    }
    const double q = tr / 3.0;
    const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
    const double detb =
        b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = detb / 2.0;
    r = std::max(-1.0, std::min(1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = tr - e1 - e3;
    std::array<double, 3> ev{e1, e2, e3};
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Curvature diagnostic at a point: Hessian eigenvalues and whether the field
/// is locally strictly concave there (all eigenvalues negative). Reported,
/// never enforced; planners run regardless.
struct CurvatureReport {
    std::array<double, 3> eigenvalues{};
    bool negative_definite = false;
};

inline CurvatureReport curvature_at(const RewardModel& model, const Vec3& p) {
    CurvatureReport r;
    r.eigenvalues = symmetric_eigenvalues(reward_hessian(model, p));
    r.negative_definite = r.eigenvalues[2] < 0.0;
    return r;
}

/// Stationary point of the six-parameter field, p* = g(theta), computed by
/// solving dC/dp = 0 exactly.
///
/// With theta = [t1..t6] over [z^2y, x^2, y^2, z^2, yz, xz]:
///   dC/dx = 2 t2 x + t6 z          => x = -t6 z / (2 t2)
///   dC/dy = t1 z^2 + 2 t3 y + t5 z => y = -(t1 z + t5) z / (2 t3)
///   dC/dz = 2 t1 y z + 2 t4 z + t5 y + t6 x
/// Substituting the first two into the third leaves z * Q(z) = 0 with
///   Q(z) = 2 t1^2 z^2 + 3 t1 t5 z + (t5^2 - 4 t3 t4 + t3 t6^2 / t2).
/// The origin is always stationary (every regressor has degree >= 2). When
/// t5 = 0 or Q has no real root the origin is returned; otherwise the root
/// pair maximizing C is returned (larger z on ties). The point may lie far
/// outside any operating domain; callers wanting an in-domain optimum use
/// constrained_optimum.
inline Vec3 unconstrained_optimum(const ThetaVector& theta) {
    if (theta.kind != BasisKind::Reduced6)
        throw InvalidDimensionError("closed-form optimum requires the 6-term basis");
    const std::vector<double>& t = theta.coeffs;
    if (t[0] == 0.0 || t[1] == 0.0 || t[2] == 0.0)
        throw SingularParameterError("stationary point undefined: one of the first three "
                                     "coefficients is zero");
    if (t[4] == 0.0) return {0.0, 0.0, 0.0};

    const double a = 2.0 * t[0] * t[0];
    const double b = 3.0 * t[0] * t[4];
    const double c = t[4] * t[4] - 4.0 * t[2] * t[3] + t[2] * t[5] * t[5] / t[1];
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {0.0, 0.0, 0.0};

    const double sq = std::sqrt(disc);
    const RewardModel model(BasisKind::Reduced6, theta);
    Vec3 best{0.0, 0.0, 0.0};
    double best_val = -std::numeric_limits<double>::infinity();
    bool have = false;
    for (double z : {(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)}) {
        const double y = -(t[0] * z + t[4]) * z / (2.0 * t[2]);
        const double x = -t[5] * z / (2.0 * t[1]);
        const Vec3 cand{x, y, z};
        const double val = reward(model, cand);
        if (!have || val > best_val || (val == best_val && z > best[2])) {
            best = cand;
            best_val = val;
            have = true;
        }
    }
    return best;
}

/// Grid viewpoint maximizing the field, with its value. Ties break to the
/// smallest (elev_idx, azim_idx).
inline std::pair<Viewpoint, double> constrained_optimum(const RewardModel& model,
                                                        const GridDomain& grid) {
    Viewpoint best;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.n_elev; ++i) {
        for (int j = 0; j < grid.n_azim; ++j) {
            const Viewpoint v = make_viewpoint(grid, i, j);
            const double val = reward(model, v.position);
            if (val > best_val) {
                best_val = val;
                best = v;
            }
        }
    }
    return {best, best_val};
}

}  // namespace viewplan

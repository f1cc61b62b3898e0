#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "viewplan/errors.hpp"
#include "viewplan/vec3.hpp"

namespace viewplan {

enum class BasisKind { Full20, Reduced6 };

inline int basis_dim(BasisKind kind) { return kind == BasisKind::Full20 ? 20 : 6; }

inline const char* basis_name(BasisKind kind) {
    return kind == BasisKind::Full20 ? "full20" : "reduced6";
}

/// Positions of the six reduced regressors inside the 20-term list:
/// z^2*y, x^2, y^2, z^2, y*z, x*z.
constexpr std::array<int, 6> kReducedInFull = {10, 11, 12, 13, 15, 16};

/// Regressor vector at p, written into out (size basis_dim(kind)).
///
/// Full20 order is frozen:
///   [1, x^3, y^3, z^3, xyz, x^2y, x^2z, y^2z, y^2x, z^2x, z^2y,
///    x^2, y^2, z^2, xy, yz, xz, x, y, z]
/// Reduced6 order is frozen: [z^2y, x^2, y^2, z^2, yz, xz].
/// Parameter tables load positionally against these orders.
inline void eval_basis(BasisKind kind, const Vec3& p, double* out) {
    const double x = p[0], y = p[1], z = p[2];
    if (kind == BasisKind::Reduced6) {
        out[0] = z * z * y;
        out[1] = x * x;
        out[2] = y * y;
        out[3] = z * z;
        out[4] = y * z;
        out[5] = x * z;
        return;
    }
    out[0] = 1.0;
    out[1] = x * x * x;
    out[2] = y * y * y;
    out[3] = z * z * z;
    out[4] = x * y * z;
    out[5] = x * x * y;
    out[6] = x * x * z;
    out[7] = y * y * z;
    out[8] = y * y * x;
    out[9] = z * z * x;
    out[10] = z * z * y;
    out[11] = x * x;
    out[12] = y * y;
    out[13] = z * z;
    out[14] = x * y;
    out[15] = y * z;
    out[16] = x * z;
    out[17] = x;
    out[18] = y;
    out[19] = z;
}

inline std::vector<double> eval_basis(BasisKind kind, const Vec3& p) {
    std::vector<double> out(static_cast<std::size_t>(basis_dim(kind)));
    eval_basis(kind, p, out.data());
    return out;
}

/// Gradient of each regressor at p; grads[i] = d(phi_i)/dp.
inline void basis_gradients(BasisKind kind, const Vec3& p, Vec3* grads) {
    const double x = p[0], y = p[1], z = p[2];
    if (kind == BasisKind::Reduced6) {
        grads[0] = {0.0, z * z, 2.0 * z * y};
        grads[1] = {2.0 * x, 0.0, 0.0};
        grads[2] = {0.0, 2.0 * y, 0.0};
        grads[3] = {0.0, 0.0, 2.0 * z};
        grads[4] = {0.0, z, y};
        grads[5] = {z, 0.0, x};
        return;
    }
    grads[0] = {0.0, 0.0, 0.0};
    grads[1] = {3.0 * x * x, 0.0, 0.0};
    grads[2] = {0.0, 3.0 * y * y, 0.0};
    grads[3] = {0.0, 0.0, 3.0 * z * z};
    grads[4] = {y * z, x * z, x * y};
    grads[5] = {2.0 * x * y, x * x, 0.0};
    grads[6] = {2.0 * x * z, 0.0, x * x};
    grads[7] = {0.0, 2.0 * y * z, y * y};
    grads[8] = {y * y, 2.0 * x * y, 0.0};
    grads[9] = {z * z, 0.0, 2.0 * x * z};
    grads[10] = {0.0, z * z, 2.0 * y * z};
    grads[11] = {2.0 * x, 0.0, 0.0};
    grads[12] = {0.0, 2.0 * y, 0.0};
    grads[13] = {0.0, 0.0, 2.0 * z};
    grads[14] = {y, x, 0.0};
    grads[15] = {0.0, z, y};
    grads[16] = {z, 0.0, x};
    grads[17] = {1.0, 0.0, 0.0};
    grads[18] = {0.0, 1.0, 0.0};
    grads[19] = {0.0, 0.0, 1.0};
}

/// Parameter vector bound to a basis kind.
struct ThetaVector {
    BasisKind kind = BasisKind::Reduced6;
    std::vector<double> coeffs;

    ThetaVector() = default;
    ThetaVector(BasisKind k, std::vector<double> c) : kind(k), coeffs(std::move(c)) {
        if (static_cast<int>(coeffs.size()) != basis_dim(kind))
            throw InvalidDimensionError("theta length does not match basis (" +
                                        std::to_string(coeffs.size()) + " vs " +
                                        std::to_string(basis_dim(kind)) + ")");
        for (double v : coeffs)
            if (!std::isfinite(v)) throw InvalidDimensionError("theta entries must be finite");
    }

    int dim() const { return static_cast<int>(coeffs.size()); }
};

}  // namespace viewplan
